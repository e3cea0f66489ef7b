#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "fiberent/cli.hpp"

namespace fiberent::cli {

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // fold -0 so identical curves print identically
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string pair_column(std::size_t i, std::size_t j) {
  if (i < 10 && j < 10) return "C_" + std::to_string(i) + std::to_string(j);
  return "C_" + std::to_string(i) + "_" + std::to_string(j);
}

std::string csv_header(std::size_t n_qubits, bool with_param) {
  std::string h = with_param ? "param,witness,neg_witness,fidelity" : "witness,neg_witness,fidelity";
  for (std::size_t i = 0; i < n_qubits; ++i)
    for (std::size_t j = i + 1; j < n_qubits; ++j) h += "," + pair_column(i, j);
  h += ",esd,dsf\n";
  return h;
}

namespace {

std::string row(std::optional<double> param, double witness, double fidelity, const PairConcurrences& pairs, bool esd,
                bool dsf) {
  std::string r;
  if (param) r += format_number(*param) + ",";
  r += format_number(witness) + "," + format_number(-witness) + "," + format_number(fidelity);
  for (const auto& [pair, c] : pairs) r += "," + format_number(c);
  r += esd ? ",1" : ",0";
  r += dsf ? ",1\n" : ",0\n";
  return r;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string csv_row(const MetricsReport& report, bool dsf, std::optional<double> param) {
  return row(param, report.witness_value, report.fidelity, report.pair_concurrences, report.esd_flag, dsf);
}

std::string sweep_csv(const SweepResult& result, std::size_t n_qubits) {
  std::string out = csv_header(n_qubits, true);
  for (std::size_t k = 0; k < result.parameters.size(); ++k) {
    out += row(result.parameters[k], result.witness_values[k], result.fidelities[k], result.concurrences[k],
               result.esd_flags[k], result.dsf_flags[k]);
  }
  return out;
}

std::string render_svg(const std::vector<SvgSeries>& series, const std::string& x_label, const std::string& y_label) {
  constexpr double width = 640, height = 420;
  constexpr double left = 70, right = 160, top = 20, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (double x : s.x) xmin = std::min(xmin, x), xmax = std::max(xmax, x);
    for (double y : s.y) ymin = std::min(ymin, y), ymax = std::max(ymax, y);
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax - xmin < 1e-300) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) ymin -= 0.5, ymax += 0.5;
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * plot_h; };
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  static const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
      << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
      << top + plot_h << "\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h << "\"/>\n"
      << "</g>\n";

  svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = xmin + (xmax - xmin) * t / 4.0;
    const double yv = ymin + (ymax - ymin) * t / 4.0;
    svg << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << top + plot_h + 16 << "\" text-anchor=\"middle\">"
        << xml_escape(format_number(std::round(xv * 1e4) / 1e4)) << "</text>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << fmt(py(yv) + 4) << "\" text-anchor=\"end\">"
        << xml_escape(format_number(std::round(yv * 1e4) / 1e4)) << "</text>\n";
  }
  if (ymin < 0.0 && ymax > 0.0) {
    svg << "<line x1=\"" << left << "\" y1=\"" << fmt(py(0)) << "\" x2=\"" << left + plot_w << "\" y2=\""
        << fmt(py(0)) << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  }
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\" font-size=\"13\">"
      << xml_escape(x_label) << "</text>\n";
  svg << "<text x=\"18\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
      << top + plot_h / 2 << ")\">" << xml_escape(y_label) << "</text>\n";
  svg << "</g>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = palette[s % (sizeof palette / sizeof *palette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    const std::size_t n = std::min(series[s].x.size(), series[s].y.size());
    for (std::size_t k = 0; k < n; ++k) {
      if (k) svg << ' ';
      svg << fmt(px(series[s].x[k])) << ',' << fmt(py(series[s].y[k]));
    }
    svg << "\"/>\n";
    const double ly = top + 14 + 18.0 * static_cast<double>(s);
    svg << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + plot_w + 32 << "\" y2=\""
        << ly << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    svg << "<text x=\"" << left + plot_w + 36 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(series[s].label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace fiberent::cli

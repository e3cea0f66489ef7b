#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "fiberent/cli.hpp"
#include "fiberent/metrics.hpp"
#include "fiberent/oracle.hpp"

namespace fiberent::cli {

namespace {

// Largest register assembled as an explicit density matrix by `simulate`;
// beyond it the report comes from the closed forms.
constexpr std::size_t kMatrixPathMaxQubits = 10;

struct Common {
  std::string config;
  std::string out;
  std::string svg;
  bool quiet = false;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << content;
  f.flush();
  if (!f) throw IoError("write to " + path + " failed");
}

std::string flag(bool b) { return b ? "yes" : "no"; }

void print_report(std::ostream& out, const MetricsReport& r, bool dsf) {
  out << "witness:    " << format_number(r.witness_value) << '\n'
      << "fidelity:   " << format_number(r.fidelity) << '\n';
  for (const auto& [pair, c] : r.pair_concurrences) {
    out << pair_column(pair.first, pair.second) << ":       " << format_number(c) << '\n';
  }
  out << "esd:        " << flag(r.esd_flag) << '\n' << "dsf:        " << flag(dsf) << '\n';
}

int cmd_simulate(const Common& opt, std::ostream& out) {
  const RunConfig cfg = load_run_config(opt.config);
  MetricsReport report;
  if (cfg.n_qubits() <= kMatrixPathMaxQubits) {
    const PureState psi = make_state(cfg.state, cfg.n_qubits());
    report = evaluate(apply_channel(psi, cfg.network), witness_spec(cfg.state, cfg.n_qubits()));
  } else {
    report = closed_form_report(cfg.network, cfg.state);
  }
  const bool dsf = dsf_check(cfg.network, cfg.state).is_dsf;
  const std::string csv = csv_header(cfg.n_qubits(), false) + csv_row(report, dsf, std::nullopt);

  if (!opt.quiet) print_report(out, report, dsf);
  if (!opt.out.empty()) {
    write_file(opt.out, csv);
  } else {
    out << csv;
  }
  return kExitOk;
}

std::string series_path(const std::string& out, const std::string& label) {
  std::filesystem::path p(out);
  std::filesystem::path named = p.parent_path() / (p.stem().string() + "." + label + p.extension().string());
  return named.string();
}

int cmd_sweep(const Common& opt, std::ostream& out) {
  const RunConfig cfg = load_run_config(opt.config);
  if (!cfg.sweep) throw ConfigError("sweep: block required by the sweep command");
  const SweepSpec& spec = *cfg.sweep;

  std::vector<SvgSeries> curves;
  std::vector<std::string> x_names;
  for (const auto& s : spec.series) {
    const SweepResult result = sweep(s.network, s.kind, s.scan, spec.grid);
    const std::string csv = sweep_csv(result, s.network.n_qubits);
    if (!opt.out.empty()) {
      const std::string path = spec.series.size() == 1 ? opt.out : series_path(opt.out, s.label);
      write_file(path, csv);
      if (!opt.quiet) out << s.label << ": " << path << '\n';
    } else {
      if (spec.series.size() > 1) out << "# " << s.label << '\n';
      out << csv;
    }
    if (!opt.quiet) {
      out << s.label << ": parameter " << result.parameter << ", " << result.parameters.size()
          << " points, witness " << to_string(result.witness_trend) << '\n';
    }

    SvgSeries curve{s.label, result.parameters, {}};
    for (double v : result.witness_values) curve.y.push_back(-v);
    curves.push_back(std::move(curve));
    if (std::find(x_names.begin(), x_names.end(), result.parameter) == x_names.end()) {
      x_names.push_back(result.parameter);
    }
  }

  if (!opt.svg.empty()) {
    std::string x_label;
    for (const auto& name : x_names) x_label += (x_label.empty() ? "" : " / ") + name;
    write_file(opt.svg, render_svg(curves, x_label, "-V (negative witness)"));
  }
  return kExitOk;
}

int cmd_esd(const Common& opt, std::ostream& out) {
  const RunConfig cfg = load_run_config(opt.config);
  if (!cfg.esd) throw ConfigError("esd: block required by the esd command");
  const EsdSpec& spec = *cfg.esd;

  EsdQuery query;
  query.kind = cfg.state;
  query.base = cfg.network;
  query.scan = spec.scan;
  std::optional<double> threshold;
  if (spec.hi) {
    query.lo = spec.lo.value_or(0.0);
    query.hi = *spec.hi;
    threshold = esd_threshold(query);
  } else if (auto bracket = find_esd_bracket(query, 1.0, spec.limit)) {
    query.lo = bracket->first;
    query.hi = bracket->second;
    threshold = esd_threshold(query);
  }

  const std::string parameter = spec.scan.describe(cfg.network.effect);
  const std::string value = threshold ? format_number(*threshold) : "none";
  if (opt.quiet) {
    out << value << '\n';
  } else {
    out << "parameter: " << parameter << '\n' << "threshold: " << value << '\n';
  }
  if (!opt.out.empty()) write_file(opt.out, "parameter,threshold\n" + parameter + "," + value + "\n");
  return kExitOk;
}

int cmd_dsf(const Common& opt, std::ostream& out) {
  const RunConfig cfg = load_run_config(opt.config);
  const DsfResult r = dsf_check(cfg.network, cfg.state);
  const std::string csv = "witness,pure_witness,dsf\n" + format_number(r.witness_value) + "," +
                          format_number(r.pure_value) + "," + (r.is_dsf ? "1" : "0") + "\n";
  if (opt.quiet) {
    out << (r.is_dsf ? "dsf" : "not dsf") << '\n';
  } else {
    out << "witness:      " << format_number(r.witness_value) << '\n'
        << "pure witness: " << format_number(r.pure_value) << '\n'
        << "dsf:          " << flag(r.is_dsf) << '\n';
  }
  if (!opt.out.empty()) write_file(opt.out, csv);
  return kExitOk;
}

constexpr double kOracleTolerance = 1e-6;

int cmd_oracle_compare(const Common& opt, std::ostream& out) {
  const RunConfig cfg = load_run_config(opt.config);
  if (cfg.network.effect != ChannelEffect::Pmd) throw ConfigError("effect: oracle-compare supports only \"pmd\"");
  if (cfg.n_qubits() > oracle::kMaxGridQubits) {
    throw ConfigError("n_qubits: oracle-compare supports at most " + std::to_string(oracle::kMaxGridQubits) +
                      " photons");
  }
  const bool correlated = cfg.network.spectrum.kind == SpectrumKind::CwPumpCorrelated;
  oracle::FrequencyGrid grid = cfg.oracle_grid.value_or(oracle::default_grid(cfg.n_qubits(), correlated));
  grid.correlated = correlated;

  const PureState psi = make_state(cfg.state, cfg.n_qubits());
  const DensityMatrix analytic = apply_channel(psi, cfg.network);
  const DensityMatrix brute = oracle::grid_apply_pmd(psi, cfg.network, grid);
  const double dev = max_abs_diff(analytic.matrix(), brute.matrix());
  const bool pass = dev < kOracleTolerance;

  if (opt.quiet) {
    out << (pass ? "pass" : "fail") << '\n';
  } else {
    out << "grid:          " << grid.points << " points/axis, half-width " << format_number(grid.half_width)
        << " bandwidths\n"
        << "max deviation: " << format_number(dev) << '\n'
        << "result:        " << (pass ? "pass" : "fail") << " (tolerance 1e-06)\n";
  }
  if (!opt.out.empty()) {
    write_file(opt.out, "max_deviation,pass\n" + format_number(dev) + "," + (pass ? "1" : "0") + "\n");
  }
  return pass ? kExitOk : kExitNumerical;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polarization-entanglement decoherence in fiber networks", "fiberent"};
  app.require_subcommand(1);

  Common opt;
  auto add_common = [&opt](CLI::App* sub, bool with_svg) {
    sub->add_option("--config", opt.config, "run configuration (JSON)")->required();
    sub->add_option("--out", opt.out, "output file");
    if (with_svg) sub->add_option("--svg", opt.svg, "SVG plot of -V against the scanned parameter");
    sub->add_flag("--quiet", opt.quiet, "print only the essential result");
  };
  auto* simulate = app.add_subcommand("simulate", "metrics of one network configuration");
  auto* sweep_cmd = app.add_subcommand("sweep", "witness curve over a parameter grid");
  auto* esd = app.add_subcommand("esd", "locate the sudden-death threshold");
  auto* dsf = app.add_subcommand("dsf-check", "test for a decoherence-free configuration");
  auto* oracle_cmd = app.add_subcommand("oracle-compare", "compare the analytic PMD state with quadrature");
  add_common(simulate, false);
  add_common(sweep_cmd, true);
  add_common(esd, false);
  add_common(dsf, false);
  add_common(oracle_cmd, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(opt, out);
    if (sweep_cmd->parsed()) return cmd_sweep(opt, out);
    if (esd->parsed()) return cmd_esd(opt, out);
    if (dsf->parsed()) return cmd_dsf(opt, out);
    return cmd_oracle_compare(opt, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace fiberent::cli

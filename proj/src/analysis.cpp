#include "fiberent/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace fiberent {

namespace {

double witness_at(const EsdQuery& query, double x) {
  return witness_closed_form(apply_scan(query.base, query.scan, x), query.kind);
}

bool detectable(double witness) { return witness_detects(witness); }

}  // namespace

std::string ScanTarget::describe(ChannelEffect effect) const {
  const std::string name = effect == ChannelEffect::Pmd ? "dgd" : "pdl";
  if (is_uniform()) return name + "*scale";
  return name + "[" + std::to_string(*photon) + "]";
}

NetworkConfig apply_scan(const NetworkConfig& base, const ScanTarget& target, double x) {
  if (!std::isfinite(x) || x < 0.0) throw std::invalid_argument("scan value must be finite and >= 0");
  NetworkConfig out = base;
  auto set = [&](FiberChannel& ch, double value) {
    (base.effect == ChannelEffect::Pmd ? ch.dgd : ch.pdl) = value;
  };
  if (target.is_uniform()) {
    for (std::size_t i = 0; i < out.channels.size(); ++i) {
      const FiberChannel& b = base.channels[i];
      set(out.channels[i], x * (base.effect == ChannelEffect::Pmd ? b.dgd : b.pdl));
    }
  } else {
    if (*target.photon >= out.channels.size()) throw std::invalid_argument("scan photon index out of range");
    set(out.channels[*target.photon], x);
  }
  return out;
}

std::optional<double> esd_threshold(const EsdQuery& query) {
  if (!std::isfinite(query.lo) || !std::isfinite(query.hi) || !(query.lo < query.hi)) {
    throw std::invalid_argument("ESD bracket must be finite with lo < hi");
  }
  double lo = query.lo;
  double hi = query.hi;
  const bool lo_side = detectable(witness_at(query, lo));
  if (lo_side == detectable(witness_at(query, hi))) return std::nullopt;

  for (int it = 0; it < kBisectionCap && hi - lo > kRootTolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (detectable(witness_at(query, mid)) == lo_side) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::optional<std::pair<double, double>> find_esd_bracket(const EsdQuery& query, double initial_hi, double limit) {
  if (!(initial_hi > 0.0) || !(limit >= initial_hi)) throw std::invalid_argument("invalid bracket expansion limits");
  const bool at_zero = detectable(witness_at(query, 0.0));
  for (double hi = initial_hi; hi <= limit; hi *= 2.0) {
    if (detectable(witness_at(query, hi)) != at_zero) return std::make_pair(0.0, hi);
  }
  if (detectable(witness_at(query, limit)) != at_zero) return std::make_pair(0.0, limit);
  return std::nullopt;
}

DsfResult dsf_check(const NetworkConfig& config, StateKind kind) {
  DsfResult result;
  result.witness_value = witness_closed_form(config, kind);
  result.pure_value = witness_spec(kind, config.n_qubits).pure_value();
  result.is_dsf = std::abs(result.witness_value - result.pure_value) <= kDsfTolerance;
  return result;
}

std::string_view to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::Increasing: return "increasing";
    case Monotonicity::Decreasing: return "decreasing";
    case Monotonicity::Constant: return "constant";
    case Monotonicity::Mixed: return "mixed";
  }
  return "mixed";
}

Monotonicity classify_series(std::span<const double> values, double slack) {
  bool up = false;
  bool down = false;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double step = values[i] - values[i - 1];
    if (step > slack) up = true;
    if (step < -slack) down = true;
  }
  if (up && down) return Monotonicity::Mixed;
  if (up) return Monotonicity::Increasing;
  if (down) return Monotonicity::Decreasing;
  return Monotonicity::Constant;
}

SweepResult sweep(const NetworkConfig& config, StateKind kind, const ScanTarget& target,
                  std::span<const double> grid) {
  if (grid.size() < 2) throw std::invalid_argument("sweep grid needs at least two points");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("sweep grid must be strictly increasing");
  }
  config.validate();
  const double pure = witness_spec(kind, config.n_qubits).pure_value();

  SweepResult result;
  result.parameter = target.describe(config.effect);
  for (double x : grid) {
    const MetricsReport report = closed_form_report(apply_scan(config, target, x), kind);
    result.parameters.push_back(x);
    result.witness_values.push_back(report.witness_value);
    result.fidelities.push_back(report.fidelity);
    result.concurrences.push_back(report.pair_concurrences);
    result.esd_flags.push_back(report.esd_flag);
    result.dsf_flags.push_back(std::abs(report.witness_value - pure) <= kDsfTolerance);
  }
  result.witness_trend = classify_series(result.witness_values);
  return result;
}

std::vector<double> linear_grid(double start, double stop, std::size_t points) {
  if (points < 2) throw std::invalid_argument("linear_grid needs at least two points");
  if (!std::isfinite(start) || !std::isfinite(stop) || !(stop > start)) {
    throw std::invalid_argument("linear_grid needs finite start < stop");
  }
  std::vector<double> grid(points);
  const double step = (stop - start) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = start + step * static_cast<double>(i);
  grid.back() = stop;
  return grid;
}

}  // namespace fiberent

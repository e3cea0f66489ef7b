#pragma once

// Studies built on the closed-form metrics: locating entanglement sudden
// death (witness reaching zero), testing decoherence-free configurations, and
// sweeping one channel parameter to trace witness curves.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fiberent/channels.hpp"
#include "fiberent/metrics.hpp"
#include "fiberent/states.hpp"

namespace fiberent {

/// Which channel parameter a scan drives. The parameter itself (DGD or PDL)
/// follows the network's active effect.
///   single(i): photon i's parameter is set to x.
///   uniform(): every photon's parameter becomes x times its base value.
struct ScanTarget {
  std::optional<std::size_t> photon;

  static ScanTarget single(std::size_t i) { return ScanTarget{i}; }
  static ScanTarget uniform() { return ScanTarget{std::nullopt}; }

  bool is_uniform() const noexcept { return !photon.has_value(); }
  /// e.g. "dgd[0]" or "pdl*scale".
  std::string describe(ChannelEffect effect) const;
};

/// Network with the scanned parameter set to `x`. x must be >= 0.
NetworkConfig apply_scan(const NetworkConfig& base, const ScanTarget& target, double x);

struct EsdQuery {
  StateKind kind = StateKind::W;
  NetworkConfig base;
  ScanTarget scan;
  double lo = 0.0;
  double hi = 1.0;
};

inline constexpr double kRootTolerance = 1e-10;
inline constexpr int kBisectionCap = 200;

/// Parameter value where the witness changes sign inside [lo, hi], located by
/// bisection to 1e-10. std::nullopt when the endpoints share a sign (for
/// instance a witness negative over the whole bracket).
/// Throws std::invalid_argument on a non-finite or empty bracket.
std::optional<double> esd_threshold(const EsdQuery& query);

/// Grow [0, hi] geometrically (doubling) until the witness changes sign or hi
/// exceeds `limit`. Returns the bracket on success.
std::optional<std::pair<double, double>> find_esd_bracket(const EsdQuery& query, double initial_hi = 1.0,
                                                          double limit = 50.0);

struct DsfResult {
  bool is_dsf = false;
  double witness_value = 0.0;
  double pure_value = 0.0;
};

inline constexpr double kDsfTolerance = 1e-10;

/// Decoherence-free when the output witness equals the pure-state value.
DsfResult dsf_check(const NetworkConfig& config, StateKind kind);

enum class Monotonicity { Increasing, Decreasing, Constant, Mixed };

std::string_view to_string(Monotonicity m);

/// Classify a series: Constant if every step is within the slack; Increasing
/// (Decreasing) if no step falls below -slack (rises above +slack) and at
/// least one exceeds it; Mixed otherwise.
Monotonicity classify_series(std::span<const double> values, double slack = 1e-12);

struct SweepResult {
  std::string parameter;
  std::vector<double> parameters;
  std::vector<double> witness_values;
  std::vector<double> fidelities;
  std::vector<PairConcurrences> concurrences;
  std::vector<bool> esd_flags;
  std::vector<bool> dsf_flags;
  Monotonicity witness_trend = Monotonicity::Constant;
};

/// Closed-form metrics at every grid point. The grid must be strictly
/// increasing with at least two points.
SweepResult sweep(const NetworkConfig& config, StateKind kind, const ScanTarget& target,
                  std::span<const double> grid);

/// `points` evenly spaced values from start to stop inclusive.
std::vector<double> linear_grid(double start, double stop, std::size_t points);

}  // namespace fiberent

#pragma once

// Brute-force reference computations used to audit the analytic channel
// model: the spectral overlap R and the PMD output state are obtained by
// direct midpoint quadrature over a frequency grid, and the concurrence of
// X-shaped two-qubit states from its closed form.

#include <cstddef>
#include <span>

#include "fiberent/channels.hpp"
#include "fiberent/qlinalg.hpp"
#include "fiberent/states.hpp"

namespace fiberent::oracle {

/// Midpoint grid, identical on every axis: `points` nodes (odd, so omega = 0
/// is a node) spanning [-half_width * max_bw, +half_width * max_bw].
/// With `correlated` the last frequency is eliminated through
/// omega_N = -sum_{i<N} omega_i.
struct FrequencyGrid {
  std::size_t points = 201;
  double half_width = 6.0;
  bool correlated = false;

  void validate() const;
};

/// Default grid for an n-photon state-level comparison; coarser at n = 4 so
/// the full 4-D sum stays affordable.
FrequencyGrid default_grid(std::size_t n_qubits, bool correlated);

/// R(tau) = sum_omega w(omega) exp(i omega . tau) / sum_omega w(omega), with
/// w the product of Gaussian power spectra exp(-omega_i^2 / (2 bw_i^2)).
double grid_r(std::span<const double> taus, std::span<const double> bandwidths, const FrequencyGrid& grid);

inline constexpr std::size_t kMaxGridQubits = 4;

/// PMD output state by applying the per-frequency phases
/// exp(-+ i omega_i tau_i / 2) to every basis amplitude and averaging the
/// projector over the grid. grid.correlated must agree with the network's
/// spectral model. n <= 4.
DensityMatrix grid_apply_pmd(const PureState& state, const NetworkConfig& config, const FrequencyGrid& grid);

/// 2 max{0, |rho_03| - sqrt(rho_11 rho_22), |rho_12| - sqrt(rho_00 rho_33)}.
/// Entries off the diagonal and anti-diagonal must be <= 1e-12.
double xstate_concurrence(const DensityMatrix& rho2);

}  // namespace fiberent::oracle

#pragma once

// Entanglement measures: Wootters concurrence for every photon pair,
// fidelity to the input state, and the fidelity-witness expectation value.
// Closed-form counterparts evaluate the same quantities straight from the
// channel parameters without building a density matrix.

#include <cmath>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "fiberent/channels.hpp"
#include "fiberent/qlinalg.hpp"
#include "fiberent/states.hpp"

namespace fiberent {

using PhotonPair = std::pair<std::size_t, std::size_t>;
using PairConcurrences = std::map<PhotonPair, double>;

/// True when the witness certifies entanglement (value < 0). A closed form
/// that underflows to -0.0 still carries its sign and counts as negative.
inline bool witness_detects(double value) noexcept { return value < 0.0 || (value == 0.0 && std::signbit(value)); }

struct MetricsReport {
  std::size_t n_qubits = 0;
  StateKind witness_kind = StateKind::Ghz;
  PairConcurrences pair_concurrences;
  double fidelity = 0.0;
  double witness_value = 0.0;
  /// Witness no longer negative: entanglement undetectable by this witness.
  bool esd_flag = false;

  double concurrence_sum() const;
};

/// Spin-flipped product zeta = rho (sy x sy) rho* (sy x sy) for a 2-qubit rho.
ComplexMatrix spin_flip_product(const DensityMatrix& rho2);

/// Square roots of the eigenvalues of zeta, descending. They are computed as
/// the singular values of Psi^T (sy x sy) Psi with rho = Psi Psi^dagger, which
/// keeps small roots accurate to machine precision instead of sqrt(eps).
std::vector<double> wootters_roots(const DensityMatrix& rho2);

/// max{0, r1 - r2 - r3 - r4} over the Wootters roots.
double concurrence(const DensityMatrix& rho2);

/// Same quantity from the general eigensolver applied to zeta directly
/// (eigenvalues clipped, square-rooted, sorted). Roots of zero eigenvalues
/// carry an error of order sqrt(eps), so this is kept as a cross-check.
double concurrence_from_zeta(const DensityMatrix& rho2);

/// Concurrence of every unordered pair (i < j) of the reduced states.
PairConcurrences pair_concurrences(const DensityMatrix& rho);

/// <psi|rho|psi>.
double fidelity(const DensityMatrix& rho, const PureState& target);

/// a0 - <psi|rho|psi>.
double witness_value(const DensityMatrix& rho, const WitnessSpec& spec);

/// Full report from an assembled density matrix.
MetricsReport evaluate(const DensityMatrix& rho, const WitnessSpec& spec);

/// Witness expectation from channel parameters alone:
///   GHZ/PMD  -R(s o tau)/2
///   GHZ/PDL  -1/(2 cosh(sum_i s_i gamma_i))
///   W        (N - 2 - sum_{j<k} C_jk)/N
double witness_closed_form(const NetworkConfig& config, StateKind kind);

/// Pair concurrences from channel parameters alone.
///   W/PMD   C_jk = 2 R(.., s_j tau_j, .., -s_k tau_k, ..)/N
///   W/PDL   C_jk = 2 e^{-g_j - g_k} / sum_i e^{-2 g_i}   (g = signed gammas)
///   GHZ     0 for N >= 3; for N = 2 the Bell-state value R or 1/cosh.
PairConcurrences closed_form_concurrences(const NetworkConfig& config, StateKind kind);

/// Report built entirely from closed forms.
MetricsReport closed_form_report(const NetworkConfig& config, StateKind kind);

}  // namespace fiberent

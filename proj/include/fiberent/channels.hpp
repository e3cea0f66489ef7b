#pragma once

// Fiber channels acting independently on each photon: first-order PMD
// (frequency-dependent phase between the principal states) and PDL
// (polarization-selective attenuation). Both the PMD and the PDL vectors are
// taken to be aligned (or anti-aligned) with the computational basis.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "fiberent/qlinalg.hpp"
#include "fiberent/states.hpp"

namespace fiberent {

/// Orientation of a channel's PMD or PDL vector relative to the shared basis.
enum class Alignment : int { Aligned = 1, AntiAligned = -1 };

inline double sign_of(Alignment a) noexcept { return static_cast<double>(static_cast<int>(a)); }

enum class SpectrumKind { UncorrelatedGaussian, CwPumpCorrelated };

/// Per-photon Gaussian spectra with rms bandwidths (rad per time unit).
/// With CwPumpCorrelated the joint spectrum carries the constraint
/// sum_i omega_i = 0.
struct SpectralModel {
  SpectrumKind kind = SpectrumKind::UncorrelatedGaussian;
  std::vector<double> bandwidths;

  void validate(std::size_t n_qubits) const;
};

struct FiberChannel {
  double dgd = 0.0;  // differential group delay, >= 0
  Alignment dgd_sign = Alignment::Aligned;
  double pdl = 0.0;  // loss coefficient gamma (nepers), >= 0
  Alignment pdl_sign = Alignment::Aligned;

  double signed_dgd() const noexcept { return sign_of(dgd_sign) * dgd; }
  double signed_pdl() const noexcept { return sign_of(pdl_sign) * pdl; }
};

enum class ChannelEffect { Pmd, Pdl };

std::string_view to_string(ChannelEffect effect);

/// One fiber per photon. `effect` selects which channel parameter acts.
struct NetworkConfig {
  std::size_t n_qubits = 0;
  std::vector<FiberChannel> channels;
  SpectralModel spectrum;
  ChannelEffect effect = ChannelEffect::Pmd;

  /// Throws std::invalid_argument on any violated invariant.
  void validate() const;

  std::vector<double> signed_dgds() const;
  std::vector<double> signed_pdls() const;
};

/// Spectral overlap for independent Gaussian photons:
/// exp(-sum_i bw_i^2 tau_i^2 / 2).
double r_uncorrelated(std::span<const double> signed_taus, std::span<const double> bandwidths);

/// Spectral overlap for CW-pump photons (sum of frequencies pinned to zero):
/// exp(-sum_{i<j} bw_i^2 bw_j^2 (tau_i - tau_j)^2 / (2 sum_i bw_i^2)).
double r_correlated(std::span<const double> signed_taus, std::span<const double> bandwidths);

/// Dispatch on the spectral model.
double r_function(const SpectralModel& spectrum, std::span<const double> signed_taus);

/// Output state after PMD, traced over frequency:
/// rho[b][b'] = c_b conj(c_b') R(d o s o tau), with d_i = b_i - b'_i.
DensityMatrix apply_pmd(const PureState& state, const NetworkConfig& config);

/// Output state after PDL, renormalized: c_b -> c_b prod_i
/// exp(s_i gamma_i (1 - 2 b_i) / 2). Scaling is done in log space so
/// arbitrarily large losses stay finite.
DensityMatrix apply_pdl(const PureState& state, const NetworkConfig& config);

/// apply_pmd or apply_pdl according to config.effect.
DensityMatrix apply_channel(const PureState& state, const NetworkConfig& config);

/// Bit of qubit q (qubit 0 = most significant) in basis index `index`.
inline unsigned qubit_bit(std::size_t index, std::size_t q, std::size_t n_qubits) noexcept {
  return static_cast<unsigned>((index >> (n_qubits - 1 - q)) & 1U);
}

}  // namespace fiberent

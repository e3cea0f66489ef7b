#include "fiberent/channels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fiberent {

namespace {

void require_lengths(std::span<const double> taus, std::span<const double> bandwidths) {
  if (taus.size() != bandwidths.size()) {
    throw std::invalid_argument("R function: delay and bandwidth lists differ in length");
  }
}

void require_state_matches(const PureState& state, const NetworkConfig& config, ChannelEffect effect) {
  config.validate();
  if (config.effect != effect) {
    throw std::invalid_argument(std::string("network config effect is ") + std::string(to_string(config.effect)) +
                                ", expected " + std::string(to_string(effect)));
  }
  if (state.n_qubits() != config.n_qubits) {
    throw std::invalid_argument("state has " + std::to_string(state.n_qubits()) + " qubits but the network has " +
                                std::to_string(config.n_qubits) + " channels");
  }
}

/// Hermitian part; removes the rounding asymmetry left by entrywise products.
ComplexMatrix symmetrized(ComplexMatrix m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    m(r, r) = m(r, r).real();
    for (std::size_t c = r + 1; c < m.cols(); ++c) {
      const Complex avg = 0.5 * (m(r, c) + std::conj(m(c, r)));
      m(r, c) = avg;
      m(c, r) = std::conj(avg);
    }
  }
  return m;
}

}  // namespace

std::string_view to_string(ChannelEffect effect) { return effect == ChannelEffect::Pmd ? "pmd" : "pdl"; }

void SpectralModel::validate(std::size_t n_qubits) const {
  if (bandwidths.size() != n_qubits) {
    throw std::invalid_argument("spectrum lists " + std::to_string(bandwidths.size()) + " bandwidths for " +
                                std::to_string(n_qubits) + " photons");
  }
  for (double bw : bandwidths) {
    if (!std::isfinite(bw) || bw <= 0.0) throw std::invalid_argument("spectral bandwidths must be finite and > 0");
  }
}

void NetworkConfig::validate() const {
  if (n_qubits < kMinQubits || n_qubits > kMaxQubits) {
    throw std::invalid_argument("network photon count " + std::to_string(n_qubits) + " outside [2, 12]");
  }
  if (channels.size() != n_qubits) {
    throw std::invalid_argument("network has " + std::to_string(channels.size()) + " channels for " +
                                std::to_string(n_qubits) + " photons");
  }
  for (const auto& ch : channels) {
    if (!std::isfinite(ch.dgd) || ch.dgd < 0.0) throw std::invalid_argument("channel dgd must be finite and >= 0");
    if (!std::isfinite(ch.pdl) || ch.pdl < 0.0) throw std::invalid_argument("channel pdl must be finite and >= 0");
  }
  spectrum.validate(n_qubits);
}

std::vector<double> NetworkConfig::signed_dgds() const {
  std::vector<double> out;
  out.reserve(channels.size());
  for (const auto& ch : channels) out.push_back(ch.signed_dgd());
  return out;
}

std::vector<double> NetworkConfig::signed_pdls() const {
  std::vector<double> out;
  out.reserve(channels.size());
  for (const auto& ch : channels) out.push_back(ch.signed_pdl());
  return out;
}

double r_uncorrelated(std::span<const double> signed_taus, std::span<const double> bandwidths) {
  require_lengths(signed_taus, bandwidths);
  double exponent = 0.0;
  for (std::size_t i = 0; i < signed_taus.size(); ++i) {
    const double x = bandwidths[i] * signed_taus[i];
    exponent += 0.5 * x * x;
  }
  return std::exp(-exponent);
}

double r_correlated(std::span<const double> signed_taus, std::span<const double> bandwidths) {
  require_lengths(signed_taus, bandwidths);
  if (signed_taus.size() < 2) throw std::invalid_argument("r_correlated needs at least two photons");
  double weight_sum = 0.0;
  for (double bw : bandwidths) weight_sum += bw * bw;
  double pair_sum = 0.0;
  for (std::size_t i = 0; i < signed_taus.size(); ++i) {
    const double wi = bandwidths[i] * bandwidths[i];
    for (std::size_t j = i + 1; j < signed_taus.size(); ++j) {
      const double wj = bandwidths[j] * bandwidths[j];
      const double diff = signed_taus[i] - signed_taus[j];
      pair_sum += wi * wj * diff * diff;
    }
  }
  return std::exp(-pair_sum / (2.0 * weight_sum));
}

double r_function(const SpectralModel& spectrum, std::span<const double> signed_taus) {
  return spectrum.kind == SpectrumKind::UncorrelatedGaussian ? r_uncorrelated(signed_taus, spectrum.bandwidths)
                                                             : r_correlated(signed_taus, spectrum.bandwidths);
}

DensityMatrix apply_pmd(const PureState& state, const NetworkConfig& config) {
  require_state_matches(state, config, ChannelEffect::Pmd);
  const std::size_t n = config.n_qubits;
  const std::size_t dim = state.dim();
  const std::vector<double> taus = config.signed_dgds();

  std::vector<std::size_t> support;
  for (std::size_t b = 0; b < dim; ++b)
    if (state[b] != Complex{}) support.push_back(b);

  ComplexMatrix rho(dim, dim);
  std::vector<double> delay(n);
  for (std::size_t row : support) {
    for (std::size_t col : support) {
      for (std::size_t q = 0; q < n; ++q) {
        const int d = static_cast<int>(qubit_bit(row, q, n)) - static_cast<int>(qubit_bit(col, q, n));
        delay[q] = d * taus[q];
      }
      const double r = row == col ? 1.0 : r_function(config.spectrum, delay);
      rho(row, col) = state[row] * std::conj(state[col]) * r;
    }
  }
  return DensityMatrix(symmetrized(std::move(rho)));
}

DensityMatrix apply_pdl(const PureState& state, const NetworkConfig& config) {
  require_state_matches(state, config, ChannelEffect::Pdl);
  const std::size_t n = config.n_qubits;
  const std::size_t dim = state.dim();
  const std::vector<double> gammas = config.signed_pdls();

  // log of the amplitude gain for each populated basis state
  std::vector<double> log_gain(dim, -std::numeric_limits<double>::infinity());
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < dim; ++b) {
    if (state[b] == Complex{}) continue;
    double g = std::log(std::abs(state[b]));
    for (std::size_t q = 0; q < n; ++q) g += 0.5 * gammas[q] * (qubit_bit(b, q, n) == 0 ? 1.0 : -1.0);
    log_gain[b] = g;
    max_log = std::max(max_log, g);
  }

  std::vector<Complex> amp(dim);
  double norm2 = 0.0;
  for (std::size_t b = 0; b < dim; ++b) {
    if (state[b] == Complex{}) continue;
    const Complex phase = state[b] / std::abs(state[b]);
    amp[b] = phase * std::exp(log_gain[b] - max_log);
    norm2 += std::norm(amp[b]);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& a : amp) a *= inv;
  return DensityMatrix(symmetrized(ComplexMatrix::outer(amp, amp)));
}

DensityMatrix apply_channel(const PureState& state, const NetworkConfig& config) {
  return config.effect == ChannelEffect::Pmd ? apply_pmd(state, config) : apply_pdl(state, config);
}

}  // namespace fiberent

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "fiberent/channels.hpp"
#include "fiberent/qlinalg.hpp"

namespace fiberent::testing {

inline NetworkConfig pmd_network(std::vector<double> dgds, std::vector<double> bws,
                                 SpectrumKind kind = SpectrumKind::UncorrelatedGaussian) {
  NetworkConfig cfg;
  cfg.n_qubits = dgds.size();
  cfg.effect = ChannelEffect::Pmd;
  cfg.spectrum = SpectralModel{kind, std::move(bws)};
  for (double t : dgds) {
    FiberChannel ch;
    ch.dgd = std::abs(t);
    ch.dgd_sign = t < 0 ? Alignment::AntiAligned : Alignment::Aligned;
    cfg.channels.push_back(ch);
  }
  return cfg;
}

inline NetworkConfig pmd_network(std::vector<double> dgds) {
  std::vector<double> bws(dgds.size(), 1.0);
  return pmd_network(std::move(dgds), std::move(bws));
}

/// Negative entries become anti-aligned channels.
inline NetworkConfig pdl_network(std::vector<double> signed_gammas) {
  NetworkConfig cfg;
  cfg.n_qubits = signed_gammas.size();
  cfg.effect = ChannelEffect::Pdl;
  cfg.spectrum = SpectralModel{SpectrumKind::UncorrelatedGaussian, std::vector<double>(signed_gammas.size(), 1.0)};
  for (double g : signed_gammas) {
    FiberChannel ch;
    ch.pdl = std::abs(g);
    ch.pdl_sign = g < 0 ? Alignment::AntiAligned : Alignment::Aligned;
    cfg.channels.push_back(ch);
  }
  return cfg;
}

class Rng {
 public:
  explicit Rng(unsigned long long seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  double sign() { return uniform(0, 1) < 0.5 ? -1.0 : 1.0; }
  Complex complex_normal() {
    std::normal_distribution<double> d;
    return {d(gen_), d(gen_)};
  }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_); }

 private:
  std::mt19937_64 gen_;
};

inline ComplexMatrix random_matrix(Rng& rng, std::size_t r, std::size_t c) {
  ComplexMatrix m(r, c);
  for (auto& z : m.entries()) z = rng.complex_normal();
  return m;
}

/// Random full-rank density matrix G G^dagger / tr.
inline DensityMatrix random_density(Rng& rng, std::size_t n_qubits) {
  const std::size_t d = std::size_t{1} << n_qubits;
  const ComplexMatrix g = random_matrix(rng, d, d);
  ComplexMatrix rho = g * g.adjoint();
  rho *= 1.0 / rho.trace().real();
  for (std::size_t r = 0; r < d; ++r) {
    rho(r, r) = rho(r, r).real();
    for (std::size_t c = r + 1; c < d; ++c) rho(c, r) = std::conj(rho(r, c));
  }
  return DensityMatrix(rho);
}

/// Random two-qubit X-state: diagonal weights p, coherences inside the PSD
/// region |rho_03|^2 <= p0 p3, |rho_12|^2 <= p1 p2.
inline DensityMatrix random_x_state(Rng& rng) {
  double p[4];
  double total = 0;
  for (double& x : p) total += (x = rng.uniform(0.01, 1.0));
  for (double& x : p) x /= total;
  const Complex z03 = std::polar(std::sqrt(p[0] * p[3]) * rng.uniform(0, 1), rng.uniform(0, 2 * M_PI));
  const Complex z12 = std::polar(std::sqrt(p[1] * p[2]) * rng.uniform(0, 1), rng.uniform(0, 2 * M_PI));
  ComplexMatrix m(4, 4);
  for (int i = 0; i < 4; ++i) m(i, i) = p[i];
  m(0, 3) = z03;
  m(3, 0) = std::conj(z03);
  m(1, 2) = z12;
  m(2, 1) = std::conj(z12);
  return DensityMatrix(m);
}

}  // namespace fiberent::testing

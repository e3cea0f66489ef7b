#include "fiberent/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace fiberent::oracle {

namespace {

struct Axis {
  std::vector<double> nodes;
  double step = 0.0;
};

Axis make_axis(const FrequencyGrid& grid, double max_bw) {
  Axis axis;
  const double half = grid.half_width * max_bw;
  axis.step = 2.0 * half / static_cast<double>(grid.points);
  axis.nodes.resize(grid.points);
  const auto center = static_cast<std::ptrdiff_t>(grid.points / 2);
  for (std::size_t k = 0; k < grid.points; ++k) {
    axis.nodes[k] = axis.step * static_cast<double>(static_cast<std::ptrdiff_t>(k) - center);
  }
  return axis;
}

double gaussian_power(double omega, double bw) { return std::exp(-omega * omega / (2.0 * bw * bw)); }

/// Visit every node of a `dims`-dimensional grid with `points` per axis in a
/// fixed lexicographic order; `visit(index, index_sum)`.
template <typename Visit>
void for_each_node(std::size_t dims, std::size_t points, Visit&& visit) {
  std::vector<std::size_t> idx(dims, 0);
  std::size_t sum = 0;
  while (true) {
    visit(idx, sum);
    std::size_t axis = dims;
    while (axis > 0) {
      --axis;
      if (++idx[axis] < points) {
        ++sum;
        break;
      }
      sum -= idx[axis] - 1;
      idx[axis] = 0;
      if (axis == 0) return;
    }
    if (dims == 0) return;
  }
}

/// Frequency of the eliminated photon, -sum_i omega_i, as a function of the
/// index sum over the free axes (the nodes form an arithmetic progression).
std::vector<double> eliminated_frequencies(const Axis& axis, std::size_t free_dims, std::size_t points) {
  const auto center = static_cast<double>(points / 2);
  std::vector<double> out(free_dims * (points - 1) + 1);
  for (std::size_t s = 0; s < out.size(); ++s) {
    out[s] = -axis.step * (static_cast<double>(s) - center * static_cast<double>(free_dims));
  }
  return out;
}

}  // namespace

void FrequencyGrid::validate() const {
  if (points < 41 || points % 2 == 0) throw std::invalid_argument("frequency grid needs an odd point count >= 41");
  if (!(half_width >= 5.0) || !std::isfinite(half_width)) {
    throw std::invalid_argument("frequency grid half-width must be >= 5 bandwidths");
  }
}

FrequencyGrid default_grid(std::size_t n_qubits, bool correlated) {
  const std::size_t dims = correlated ? n_qubits - 1 : n_qubits;
  return FrequencyGrid{dims >= 4 ? std::size_t{51} : std::size_t{201}, 6.0, correlated};
}

double grid_r(std::span<const double> taus, std::span<const double> bandwidths, const FrequencyGrid& grid) {
  grid.validate();
  if (taus.size() != bandwidths.size() || taus.empty()) {
    throw std::invalid_argument("grid_r: delay and bandwidth lists must be non-empty and equal in length");
  }
  if (grid.correlated && taus.size() < 2) throw std::invalid_argument("grid_r: correlated spectrum needs >= 2 photons");
  const std::size_t n = taus.size();
  const std::size_t dims = grid.correlated ? n - 1 : n;
  const Axis axis = make_axis(grid, *std::max_element(bandwidths.begin(), bandwidths.end()));

  // Per-axis weight and weighted phase factor.
  std::vector<std::vector<double>> weight(n);
  std::vector<std::vector<Complex>> phase(n);
  for (std::size_t i = 0; i < dims; ++i) {
    for (double w : axis.nodes) {
      weight[i].push_back(gaussian_power(w, bandwidths[i]));
      phase[i].push_back(std::polar(1.0, w * taus[i]));
    }
  }
  if (grid.correlated) {
    for (double w : eliminated_frequencies(axis, dims, grid.points)) {
      weight[n - 1].push_back(gaussian_power(w, bandwidths[n - 1]));
      phase[n - 1].push_back(std::polar(1.0, w * taus[n - 1]));
    }
  }

  Complex num{};
  double den = 0.0;
  for_each_node(dims, grid.points, [&](const std::vector<std::size_t>& idx, std::size_t sum) {
    double w = 1.0;
    Complex p{1.0, 0.0};
    for (std::size_t i = 0; i < dims; ++i) {
      w *= weight[i][idx[i]];
      p *= phase[i][idx[i]];
    }
    if (grid.correlated) {
      w *= weight[n - 1][sum];
      p *= phase[n - 1][sum];
    }
    num += w * p;
    den += w;
  });
  return (num / den).real();
}

DensityMatrix grid_apply_pmd(const PureState& state, const NetworkConfig& config, const FrequencyGrid& grid) {
  grid.validate();
  config.validate();
  if (config.effect != ChannelEffect::Pmd) throw std::invalid_argument("grid_apply_pmd: network effect is not PMD");
  if (state.n_qubits() != config.n_qubits) throw std::invalid_argument("grid_apply_pmd: qubit count mismatch");
  if (config.n_qubits > kMaxGridQubits) throw std::invalid_argument("grid_apply_pmd: at most 4 photons");
  if (grid.correlated != (config.spectrum.kind == SpectrumKind::CwPumpCorrelated)) {
    throw std::invalid_argument("grid_apply_pmd: grid correlation flag disagrees with the spectral model");
  }

  const std::size_t n = config.n_qubits;
  const std::size_t dims = grid.correlated ? n - 1 : n;
  const auto& bws = config.spectrum.bandwidths;
  const Axis axis = make_axis(grid, *std::max_element(bws.begin(), bws.end()));

  // U(omega)|0> = exp(-i omega tau / 2)|0>,  U(omega)|1> = exp(+i omega tau / 2)|1>
  struct Tables {
    std::vector<double> weight;
    std::vector<std::array<Complex, 2>> phase;
  };
  std::vector<Tables> tables(n);
  auto fill = [&](std::size_t photon, double omega) {
    const double tau = config.channels[photon].signed_dgd();
    tables[photon].weight.push_back(gaussian_power(omega, bws[photon]));
    tables[photon].phase.push_back({std::polar(1.0, -0.5 * omega * tau), std::polar(1.0, 0.5 * omega * tau)});
  };
  for (std::size_t i = 0; i < dims; ++i)
    for (double w : axis.nodes) fill(i, w);
  if (grid.correlated)
    for (double w : eliminated_frequencies(axis, dims, grid.points)) fill(n - 1, w);

  std::vector<std::size_t> support;
  for (std::size_t b = 0; b < state.dim(); ++b)
    if (state[b] != Complex{}) support.push_back(b);
  std::vector<std::vector<unsigned>> bits(support.size(), std::vector<unsigned>(n));
  for (std::size_t s = 0; s < support.size(); ++s)
    for (std::size_t q = 0; q < n; ++q) bits[s][q] = qubit_bit(support[s], q, n);

  const std::size_t m = support.size();
  std::vector<Complex> acc(m * m);
  std::vector<Complex> out_amp(m);
  for_each_node(dims, grid.points, [&](const std::vector<std::size_t>& idx, std::size_t sum) {
    double w = 1.0;
    for (std::size_t i = 0; i < dims; ++i) w *= tables[i].weight[idx[i]];
    if (grid.correlated) w *= tables[n - 1].weight[sum];
    for (std::size_t s = 0; s < m; ++s) {
      Complex a = state[support[s]];
      for (std::size_t i = 0; i < dims; ++i) a *= tables[i].phase[idx[i]][bits[s][i]];
      if (grid.correlated) a *= tables[n - 1].phase[sum][bits[s][n - 1]];
      out_amp[s] = a;
    }
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) acc[r * m + c] += w * out_amp[r] * std::conj(out_amp[c]);
  });

  // Normalize by the accumulated trace rather than the weight sum: over
  // millions of nodes the unit-modulus phases drift by ~1e-10 in |a|^2.
  double tr = 0.0;
  for (std::size_t s = 0; s < m; ++s) tr += acc[s * m + s].real();
  ComplexMatrix rho(state.dim(), state.dim());
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) rho(support[r], support[c]) = acc[r * m + c] / tr;
  for (std::size_t r = 0; r < rho.rows(); ++r) {
    rho(r, r) = rho(r, r).real();
    for (std::size_t c = r + 1; c < rho.cols(); ++c) rho(c, r) = std::conj(rho(r, c));
  }
  return DensityMatrix(std::move(rho));
}

double xstate_concurrence(const DensityMatrix& rho2) {
  if (rho2.n_qubits() != 2) throw std::invalid_argument("xstate_concurrence needs a 2-qubit state");
  constexpr std::array<std::pair<std::size_t, std::size_t>, 8> outside{
      {{0, 1}, {0, 2}, {1, 0}, {1, 3}, {2, 0}, {2, 3}, {3, 1}, {3, 2}}};
  for (auto [r, c] : outside) {
    if (std::abs(rho2(r, c)) > 1e-12) throw std::invalid_argument("xstate_concurrence: input is not an X-state");
  }
  const double p00 = std::max(rho2(0, 0).real(), 0.0);
  const double p01 = std::max(rho2(1, 1).real(), 0.0);
  const double p10 = std::max(rho2(2, 2).real(), 0.0);
  const double p11 = std::max(rho2(3, 3).real(), 0.0);
  const double outer = std::abs(rho2(0, 3)) - std::sqrt(p01 * p10);
  const double inner = std::abs(rho2(1, 2)) - std::sqrt(p00 * p11);
  return 2.0 * std::max({0.0, outer, inner});
}

}  // namespace fiberent::oracle

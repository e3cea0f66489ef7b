#include "fiberent/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace fiberent {

namespace {

const ComplexMatrix& spin_flip() {
  static const ComplexMatrix sysy = kron(pauli_y(), pauli_y());
  return sysy;
}

void require_two_qubits(const DensityMatrix& rho2) {
  if (rho2.n_qubits() != 2) throw std::invalid_argument("concurrence needs a 2-qubit density matrix");
}

// 1/cosh(x) without overflow for large |x|.
double sech(double x) {
  const double e = std::exp(-std::abs(x));
  return 2.0 * e / (1.0 + e * e);
}

std::vector<double> w_pmd_pair_delay(const NetworkConfig& config, std::size_t j, std::size_t k) {
  std::vector<double> delay(config.n_qubits, 0.0);
  delay[j] = config.channels[j].signed_dgd();
  delay[k] = -config.channels[k].signed_dgd();
  return delay;
}

}  // namespace

double MetricsReport::concurrence_sum() const {
  double s = 0.0;
  for (const auto& [pair, c] : pair_concurrences) s += c;
  return s;
}

ComplexMatrix spin_flip_product(const DensityMatrix& rho2) {
  require_two_qubits(rho2);
  const auto& rho = rho2.matrix();
  return rho * spin_flip() * rho.conjugate() * spin_flip();
}

std::vector<double> wootters_roots(const DensityMatrix& rho2) {
  require_two_qubits(rho2);
  const HermitianEigen eig = eig_hermitian(rho2.matrix());
  ComplexMatrix psi(4, 4);
  for (std::size_t k = 0; k < 4; ++k) {
    const double w = std::sqrt(clip_psd_eigenvalue(eig.values[k]));
    for (std::size_t r = 0; r < 4; ++r) psi(r, k) = eig.vectors(r, k) * w;
  }
  // zeta = Psi Psi^+ S Psi* Psi^T S shares its nonzero spectrum with M^+ M,
  // M = Psi^T S Psi, so the roots are the singular values of M.
  return singular_values(psi.transpose() * spin_flip() * psi);
}

double concurrence(const DensityMatrix& rho2) {
  const std::vector<double> roots = wootters_roots(rho2);
  const double c = roots[0] - roots[1] - roots[2] - roots[3];
  return std::clamp(c, 0.0, 1.0);
}

double concurrence_from_zeta(const DensityMatrix& rho2) {
  const std::vector<Complex> lambdas = eigvals_general(spin_flip_product(rho2));
  std::vector<double> roots;
  for (const Complex& l : lambdas) {
    if (std::abs(l.imag()) > 1e-6) throw NumericalError("spin-flip product has a complex eigenvalue");
    roots.push_back(std::sqrt(clip_psd_eigenvalue(l.real())));
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return std::clamp(roots[0] - roots[1] - roots[2] - roots[3], 0.0, 1.0);
}

PairConcurrences pair_concurrences(const DensityMatrix& rho) {
  const std::size_t n = rho.n_qubits();
  if (n < 2) throw std::invalid_argument("pair_concurrences needs at least two qubits");
  PairConcurrences out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (n == 2) {
        out[{i, j}] = concurrence(rho);
      } else {
        const std::array<std::size_t, 2> keep{i, j};
        out[{i, j}] = concurrence(partial_trace(rho, keep));
      }
    }
  }
  return out;
}

double fidelity(const DensityMatrix& rho, const PureState& target) {
  if (rho.dim() != target.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  std::vector<std::size_t> support;
  for (std::size_t b = 0; b < target.dim(); ++b)
    if (target[b] != Complex{}) support.push_back(b);
  Complex acc{};
  for (std::size_t r : support)
    for (std::size_t c : support) acc += std::conj(target[r]) * rho(r, c) * target[c];
  return acc.real();
}

double witness_value(const DensityMatrix& rho, const WitnessSpec& spec) {
  if (rho.n_qubits() != spec.n_qubits) throw std::invalid_argument("witness_value: dimension mismatch");
  return spec.a0 - fidelity(rho, spec.target);
}

MetricsReport evaluate(const DensityMatrix& rho, const WitnessSpec& spec) {
  MetricsReport report;
  report.n_qubits = rho.n_qubits();
  report.witness_kind = spec.kind;
  report.pair_concurrences = pair_concurrences(rho);
  report.fidelity = fidelity(rho, spec.target);
  report.witness_value = spec.a0 - report.fidelity;
  report.esd_flag = !witness_detects(report.witness_value);
  return report;
}

PairConcurrences closed_form_concurrences(const NetworkConfig& config, StateKind kind) {
  config.validate();
  const std::size_t n = config.n_qubits;
  PairConcurrences out;

  if (kind == StateKind::Ghz) {
    double bell = 0.0;
    if (n == 2) {
      if (config.effect == ChannelEffect::Pmd) {
        bell = r_function(config.spectrum, config.signed_dgds());
      } else {
        const auto g = config.signed_pdls();
        bell = sech(g[0] + g[1]);
      }
    }
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) out[{j, k}] = bell;
    return out;
  }

  const double nd = static_cast<double>(n);
  if (config.effect == ChannelEffect::Pmd) {
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        out[{j, k}] = 2.0 * r_function(config.spectrum, w_pmd_pair_delay(config, j, k)) / nd;
    return out;
  }

  // PDL: log-domain weights e_i = -2 g_i, shifted by their maximum.
  const auto g = config.signed_pdls();
  std::vector<double> e(n);
  for (std::size_t i = 0; i < n; ++i) e[i] = -2.0 * g[i];
  const double top = *std::max_element(e.begin(), e.end());
  double denom = 0.0;
  for (double ei : e) denom += std::exp(ei - top);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) out[{j, k}] = 2.0 * std::exp(0.5 * (e[j] + e[k]) - top) / denom;
  return out;
}

double witness_closed_form(const NetworkConfig& config, StateKind kind) {
  config.validate();
  if (kind == StateKind::Ghz) {
    if (config.effect == ChannelEffect::Pmd) return -0.5 * r_function(config.spectrum, config.signed_dgds());
    double total = 0.0;
    for (double g : config.signed_pdls()) total += g;
    return -0.5 * sech(total);
  }
  double sum = 0.0;
  for (const auto& [pair, c] : closed_form_concurrences(config, kind)) sum += c;
  const double nd = static_cast<double>(config.n_qubits);
  return (nd - 2.0 - sum) / nd;
}

MetricsReport closed_form_report(const NetworkConfig& config, StateKind kind) {
  const WitnessSpec spec = witness_spec(kind, config.n_qubits);
  MetricsReport report;
  report.n_qubits = config.n_qubits;
  report.witness_kind = kind;
  report.pair_concurrences = closed_form_concurrences(config, kind);
  report.witness_value = witness_closed_form(config, kind);
  report.fidelity = spec.a0 - report.witness_value;
  report.esd_flag = !witness_detects(report.witness_value);
  return report;
}

}  // namespace fiberent

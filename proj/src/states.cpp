#include "fiberent/states.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fiberent {

namespace {

void require_photon_count(std::size_t n) {
  if (n < kMinQubits || n > kMaxQubits) {
    throw std::invalid_argument("photon count " + std::to_string(n) + " outside [2, 12]");
  }
}

}  // namespace

PureState::PureState(std::size_t n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  if (n_qubits_ == 0 || n_qubits_ > kMaxQubits) throw std::invalid_argument("PureState: qubit count out of range");
  if (amplitudes_.size() != (std::size_t{1} << n_qubits_)) {
    throw std::invalid_argument("PureState: amplitude count must be 2^n");
  }
  double norm2 = 0.0;
  for (const auto& a : amplitudes_) norm2 += std::norm(a);
  if (std::abs(norm2 - 1.0) > 1e-12) throw std::invalid_argument("PureState: amplitudes are not unit norm");
}

std::string_view to_string(StateKind kind) { return kind == StateKind::Ghz ? "ghz" : "w"; }

PureState ghz_state(std::size_t n) {
  require_photon_count(n);
  std::vector<Complex> amp(std::size_t{1} << n);
  amp.front() = amp.back() = 1.0 / std::sqrt(2.0);
  return PureState(n, std::move(amp));
}

PureState w_state(std::size_t n) {
  require_photon_count(n);
  std::vector<Complex> amp(std::size_t{1} << n);
  const double a = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t q = 0; q < n; ++q) amp[std::size_t{1} << q] = a;
  return PureState(n, std::move(amp));
}

PureState make_state(StateKind kind, std::size_t n) {
  return kind == StateKind::Ghz ? ghz_state(n) : w_state(n);
}

WitnessSpec witness_spec(StateKind kind, std::size_t n) {
  const double a0 = kind == StateKind::Ghz ? 0.5 : static_cast<double>(n - 1) / static_cast<double>(n);
  return WitnessSpec{kind, n, a0, make_state(kind, n)};
}

}  // namespace fiberent

#pragma once

// Canonical multi-photon polarization states and their fidelity witnesses.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "fiberent/qlinalg.hpp"

namespace fiberent {

inline constexpr std::size_t kMinQubits = 2;
inline constexpr std::size_t kMaxQubits = 12;

/// Normalized amplitude vector over the 2^n polarization basis.
class PureState {
 public:
  /// Throws std::invalid_argument unless the length is 2^n (n in [1, 12])
  /// and the norm is 1 within 1e-12.
  PureState(std::size_t n_qubits, std::vector<Complex> amplitudes);

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

  DensityMatrix projector() const { return DensityMatrix::pure(amplitudes_); }

 private:
  std::size_t n_qubits_;
  std::vector<Complex> amplitudes_;
};

enum class StateKind { Ghz, W };

std::string_view to_string(StateKind kind);

/// (|0...0> + |1...1>)/sqrt(2), n in [2, 12].
PureState ghz_state(std::size_t n);

/// Equal superposition of the n single-excitation basis states, n in [2, 12].
PureState w_state(std::size_t n);

PureState make_state(StateKind kind, std::size_t n);

/// Fidelity witness a0*I - |psi><psi|. a0 is the largest overlap of the
/// target with a biseparable state: 1/2 for GHZ, (n-1)/n for W.
struct WitnessSpec {
  StateKind kind;
  std::size_t n_qubits;
  double a0;
  PureState target;

  /// Witness expectation on the undisturbed target, a0 - 1.
  double pure_value() const noexcept { return a0 - 1.0; }
};

WitnessSpec witness_spec(StateKind kind, std::size_t n);

}  // namespace fiberent

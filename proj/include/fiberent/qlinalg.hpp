#pragma once

// Small dense complex linear algebra for multi-qubit density matrices.
//
// Basis convention shared by the whole library: qubit 0 (photon A) is the
// most significant bit of a basis index, so |q0 q1 ... q_{n-1}> maps to
// index sum_k q_k * 2^(n-1-k).

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace fiberent {

using Complex = std::complex<double>;

/// Raised when an iterative routine fails to converge or a numerical
/// invariant is violated beyond tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> diag);
  static ComplexMatrix outer(std::span<const Complex> ket, std::span<const Complex> bra);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Complex> entries() const noexcept { return data_; }
  std::span<Complex> entries() noexcept { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix conjugate() const;
  ComplexMatrix transpose() const;
  Complex trace() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Largest entrywise modulus of a - b. Shapes must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest entrywise modulus of m - m^dagger.
double hermiticity_error(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Pauli sigma_y.
ComplexMatrix pauli_y();

/// Density operator on n qubits. Construction checks the cheap invariants
/// (shape 2^n x 2^n, Hermitian within 1e-12, unit trace within 1e-12);
/// positivity is reported by check_invariants().
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kPsdTol = 1e-10;

  explicit DensityMatrix(ComplexMatrix m);

  /// Projector |psi><psi|; psi must have power-of-two length.
  static DensityMatrix pure(std::span<const Complex> psi);

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return matrix_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return matrix_(r, c); }

 private:
  std::size_t n_qubits_ = 0;
  ComplexMatrix matrix_;
};

struct InvariantReport {
  double hermiticity_error = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;
  bool finite = true;

  bool ok() const noexcept {
    return finite && hermiticity_error <= DensityMatrix::kHermitianTol &&
           trace_error <= DensityMatrix::kTraceTol &&
           min_eigenvalue >= -DensityMatrix::kPsdTol;
  }
};

/// Full invariant audit. The PSD check runs on the support of the diagonal:
/// rows with a zero diagonal entry must vanish entirely, and the remaining
/// principal block is diagonalized.
InvariantReport check_invariants(const DensityMatrix& rho);

/// Reduced state on the qubits listed in `keep` (any order, no duplicates).
/// The reduced basis orders kept qubits by ascending original index.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);

/// Eigenvalues of a Hermitian matrix (Hermitian within 1e-10), descending.
std::vector<double> eigvals_hermitian(const ComplexMatrix& m);

struct HermitianEigen {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // column k pairs with values[k]
};

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi.
HermitianEigen eig_hermitian(const ComplexMatrix& m);

/// Eigenvalues of a general square complex matrix of dimension <= 8, via
/// Householder reduction to Hessenberg form and shifted QR.
/// Throws NumericalError when the iteration cap is hit.
std::vector<Complex> eigvals_general(const ComplexMatrix& m);

/// Singular values of an arbitrary complex matrix, descending
/// (one-sided Jacobi; absolute accuracy ~ eps * ||m||).
std::vector<double> singular_values(const ComplexMatrix& m);

/// Clip an eigenvalue of a PSD operator: values in [-1e-10, 0) become 0,
/// anything more negative throws NumericalError.
double clip_psd_eigenvalue(double value);

}  // namespace fiberent

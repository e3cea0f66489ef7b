#include "fiberent/qlinalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace fiberent {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
  }
}

std::size_t qubits_for_dim(std::size_t dim) {
  if (dim == 0 || !std::has_single_bit(dim)) {
    throw std::invalid_argument("density matrix dimension must be a power of two");
  }
  return static_cast<std::size_t>(std::countr_zero(dim));
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw std::invalid_argument("ComplexMatrix: entry count does not match rows*cols");
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> ket, std::span<const Complex> bra) {
  ComplexMatrix m(ket.size(), bra.size());
  for (std::size_t r = 0; r < ket.size(); ++r) {
    if (ket[r] == Complex{}) continue;
    for (std::size_t c = 0; c < bra.size(); ++c) m(r, c) = ket[r] * std::conj(bra[c]);
  }
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix out(*this);
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw std::invalid_argument("trace of non-square matrix");
  Complex t{};
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "matrix addition");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "matrix subtraction");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& z : data_) z *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: inner dimension mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex lhs = a(r, k);
      if (lhs == Complex{}) continue;
      for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) += lhs * b(k, c);
    }
  }
  return out;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double worst = 0.0;
  auto lhs = a.entries();
  auto rhs = b.entries();
  for (std::size_t i = 0; i < lhs.size(); ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
  return worst;
}

double hermiticity_error(const ComplexMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("hermiticity_error: non-square matrix");
  double worst = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = r; c < m.cols(); ++c)
      worst = std::max(worst, std::abs(m(r, c) - std::conj(m(c, r))));
  return worst;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar)
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const Complex s = a(ar, ac);
      if (s == Complex{}) continue;
      for (std::size_t br = 0; br < b.rows(); ++br)
        for (std::size_t bc = 0; bc < b.cols(); ++bc)
          out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
    }
  return out;
}

ComplexMatrix pauli_y() {
  return ComplexMatrix(2, 2, {Complex{0, 0}, Complex{0, -1}, Complex{0, 1}, Complex{0, 0}});
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {
  if (!matrix_.is_square()) throw std::invalid_argument("density matrix must be square");
  n_qubits_ = qubits_for_dim(matrix_.rows());
  if (!matrix_.all_finite()) throw NumericalError("density matrix has non-finite entries");
  if (const double herm = hermiticity_error(matrix_); herm > kHermitianTol) {
    throw std::invalid_argument("density matrix is not Hermitian (error " + std::to_string(herm) + ")");
  }
  if (const double dt = std::abs(matrix_.trace() - 1.0); dt > kTraceTol) {
    throw std::invalid_argument("density matrix trace deviates from 1 by " + std::to_string(dt));
  }
}

DensityMatrix DensityMatrix::pure(std::span<const Complex> psi) {
  return DensityMatrix(ComplexMatrix::outer(psi, psi));
}

InvariantReport check_invariants(const DensityMatrix& rho) {
  const auto& m = rho.matrix();
  InvariantReport report;
  report.finite = m.all_finite();
  report.hermiticity_error = hermiticity_error(m);
  report.trace_error = std::abs(m.trace() - 1.0);

  std::vector<std::size_t> support;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m(r, c) != Complex{}) {
        support.push_back(r);
        break;
      }
    }
  }
  if (support.empty()) {
    report.min_eigenvalue = 0.0;
    return report;
  }
  ComplexMatrix block(support.size(), support.size());
  for (std::size_t i = 0; i < support.size(); ++i)
    for (std::size_t j = 0; j < support.size(); ++j) block(i, j) = m(support[i], support[j]);
  report.min_eigenvalue = eigvals_hermitian(block).back();
  return report;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  const std::size_t n = rho.n_qubits();
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw std::invalid_argument("partial_trace: duplicate qubit index in keep set");
  }
  if (kept.back() >= n) throw std::invalid_argument("partial_trace: qubit index out of range");

  std::vector<std::size_t> traced;
  for (std::size_t q = 0, k = 0; q < n; ++q) {
    if (k < kept.size() && kept[k] == q) {
      ++k;
    } else {
      traced.push_back(q);
    }
  }

  // Scatter a compact index over the given qubit positions (MSB = qubit 0).
  auto scatter = [n](std::size_t compact, const std::vector<std::size_t>& qubits) {
    std::size_t full = 0;
    const std::size_t width = qubits.size();
    for (std::size_t k = 0; k < width; ++k) {
      const std::size_t bit = (compact >> (width - 1 - k)) & 1U;
      full |= bit << (n - 1 - qubits[k]);
    }
    return full;
  };

  const std::size_t kept_dim = std::size_t{1} << kept.size();
  const std::size_t traced_dim = std::size_t{1} << traced.size();
  std::vector<std::size_t> kept_offsets(kept_dim);
  std::vector<std::size_t> traced_offsets(traced_dim);
  for (std::size_t i = 0; i < kept_dim; ++i) kept_offsets[i] = scatter(i, kept);
  for (std::size_t t = 0; t < traced_dim; ++t) traced_offsets[t] = scatter(t, traced);

  ComplexMatrix out(kept_dim, kept_dim);
  for (std::size_t r = 0; r < kept_dim; ++r)
    for (std::size_t c = 0; c < kept_dim; ++c) {
      Complex acc{};
      for (std::size_t t = 0; t < traced_dim; ++t)
        acc += rho(kept_offsets[r] | traced_offsets[t], kept_offsets[c] | traced_offsets[t]);
      out(r, c) = acc;
    }
  return DensityMatrix(std::move(out));
}

// ---------------------------------------------------------------------------
// Hermitian eigenproblem: cyclic Jacobi with unitary 2x2 rotations.

HermitianEigen eig_hermitian(const ComplexMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("eig_hermitian: non-square matrix");
  if (hermiticity_error(m) > 1e-10) throw std::invalid_argument("eig_hermitian: matrix is not Hermitian");
  const std::size_t n = m.rows();
  ComplexMatrix a = m;
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
  ComplexMatrix v = ComplexMatrix::identity(n);

  double scale2 = 0.0;
  for (auto z : a.entries()) scale2 += std::norm(z);
  const double floor = kEps * kEps * std::sqrt(scale2);

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double g = std::abs(apq);
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        if (g <= floor || g <= 1e-2 * kEps * (std::abs(app) + std::abs(aqq))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        rotated = true;
        const Complex phase = apq / g;
        const double theta = (aqq - app) / (2.0 * g);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // U = diag(1, conj(phase)) * [[c, s], [-s, c]]
        const Complex upp = c, upq = s;
        const Complex uqp = -s * std::conj(phase), uqq = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
      }
    }
    if (!rotated) break;
  }
  if (sweep == kMaxSweeps) throw NumericalError("eig_hermitian: Jacobi iteration did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
  HermitianEigen result{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    result.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) result.vectors(r, k) = v(r, order[k]);
  }
  return result;
}

std::vector<double> eigvals_hermitian(const ComplexMatrix& m) { return eig_hermitian(m).values; }

// ---------------------------------------------------------------------------
// General eigenproblem: Householder -> Hessenberg, then single-shift QR with
// Wilkinson shifts on the active window.

namespace {

void reduce_to_hessenberg(ComplexMatrix& h) {
  const std::size_t n = h.rows();
  if (n < 3) return;
  std::vector<Complex> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm2 += std::norm(h(i, k));
    double tail2 = xnorm2 - std::norm(h(k + 1, k));
    if (tail2 == 0.0) continue;
    const double xnorm = std::sqrt(xnorm2);
    const Complex x0 = h(k + 1, k);
    const Complex phase = std::abs(x0) == 0.0 ? Complex{1.0} : x0 / std::abs(x0);
    const Complex alpha = -phase * xnorm;

    std::fill(v.begin(), v.end(), Complex{});
    v[k + 1] = x0 - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = h(i, k);
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
    if (vnorm2 == 0.0) continue;
    const double inv = 1.0 / std::sqrt(vnorm2);
    for (std::size_t i = k + 1; i < n; ++i) v[i] *= inv;

    // h <- (I - 2 v v^H) h
    for (std::size_t c = 0; c < n; ++c) {
      Complex dot{};
      for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(v[i]) * h(i, c);
      for (std::size_t i = k + 1; i < n; ++i) h(i, c) -= 2.0 * v[i] * dot;
    }
    // h <- h (I - 2 v v^H)
    for (std::size_t r = 0; r < n; ++r) {
      Complex dot{};
      for (std::size_t i = k + 1; i < n; ++i) dot += h(r, i) * v[i];
      for (std::size_t i = k + 1; i < n; ++i) h(r, i) -= 2.0 * dot * std::conj(v[i]);
    }
    h(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
  const Complex half = 0.5 * (a - d);
  const Complex disc = std::sqrt(half * half + b * c);
  const Complex mu1 = 0.5 * (a + d) + disc;
  const Complex mu2 = 0.5 * (a + d) - disc;
  return std::abs(mu1 - d) < std::abs(mu2 - d) ? mu1 : mu2;
}

}  // namespace

std::vector<Complex> eigvals_general(const ComplexMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("eigvals_general: non-square matrix");
  if (m.rows() > 8) throw std::invalid_argument("eigvals_general: dimension exceeds 8");
  if (!m.all_finite()) throw std::invalid_argument("eigvals_general: non-finite input");
  const std::size_t n = m.rows();
  std::vector<Complex> eig(n);
  if (n == 0) return eig;

  ComplexMatrix h = m;
  reduce_to_hessenberg(h);
  double norm = 0.0;
  for (auto z : h.entries()) norm = std::max(norm, std::abs(z));

  constexpr int kIterationsPerEigenvalue = 60;
  const int cap = kIterationsPerEigenvalue * static_cast<int>(n);
  int total = 0;
  int since_deflation = 0;
  std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
  while (hi >= 0) {
    std::ptrdiff_t lo = hi;
    while (lo > 0) {
      const double sub = std::abs(h(lo, lo - 1));
      double ref = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
      if (ref == 0.0) ref = norm;
      if (sub <= kEps * ref || sub <= std::numeric_limits<double>::min()) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      eig[hi] = h(hi, hi);
      --hi;
      since_deflation = 0;
      continue;
    }
    if (++total > cap) throw NumericalError("eigvals_general: QR iteration did not converge");
    ++since_deflation;

    Complex mu;
    if (since_deflation % 11 == 0) {
      mu = h(hi, hi) + Complex{std::abs(h(hi, hi - 1)), 0.0};  // exceptional shift
    } else {
      mu = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
    }

    const auto l = static_cast<std::size_t>(lo);
    const auto u = static_cast<std::size_t>(hi);
    for (std::size_t k = l; k <= u; ++k) h(k, k) -= mu;
    std::vector<double> cs(u - l);
    std::vector<Complex> sn(u - l);
    for (std::size_t k = l; k < u; ++k) {
      const Complex x = h(k, k), y = h(k + 1, k);
      const double r = std::hypot(std::abs(x), std::abs(y));
      double c;
      Complex s;
      if (r == 0.0) {
        c = 1.0;
        s = 0.0;
      } else if (std::abs(x) == 0.0) {
        c = 0.0;
        s = std::conj(y) / std::abs(y);
      } else {
        c = std::abs(x) / r;
        s = (x / std::abs(x)) * std::conj(y) / r;
      }
      cs[k - l] = c;
      sn[k - l] = s;
      for (std::size_t j = k; j <= u; ++j) {
        const Complex a = h(k, j), b = h(k + 1, j);
        h(k, j) = c * a + s * b;
        h(k + 1, j) = -std::conj(s) * a + c * b;
      }
    }
    for (std::size_t k = l; k < u; ++k) {
      const double c = cs[k - l];
      const Complex s = sn[k - l];
      const std::size_t last = std::min(k + 1, u);
      for (std::size_t i = l; i <= last; ++i) {
        const Complex a = h(i, k), b = h(i, k + 1);
        h(i, k) = a * c + b * std::conj(s);
        h(i, k + 1) = -a * s + b * c;
      }
    }
    for (std::size_t k = l; k <= u; ++k) h(k, k) += mu;
  }
  return eig;
}

// ---------------------------------------------------------------------------
// Singular values by one-sided (Hestenes) Jacobi on columns.

std::vector<double> singular_values(const ComplexMatrix& m) {
  ComplexMatrix a = m.cols() > m.rows() ? m.adjoint() : m;
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();

  auto column_dot = [&](std::size_t p, std::size_t q) {
    Complex s{};
    for (std::size_t r = 0; r < rows; ++r) s += std::conj(a(r, p)) * a(r, q);
    return s;
  };

  constexpr int kMaxSweeps = 80;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        const double alpha = column_dot(p, p).real();
        const double beta = column_dot(q, q).real();
        const Complex gamma = column_dot(p, q);
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const Complex phase = gamma / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t r = 0; r < rows; ++r) {
          const Complex ap = a(r, p);
          const Complex aq = a(r, q) * std::conj(phase);
          a(r, p) = c * ap - s * aq;
          a(r, q) = s * ap + c * aq;
        }
      }
    }
    if (!rotated) break;
  }
  if (sweep == kMaxSweeps) throw NumericalError("singular_values: Jacobi iteration did not converge");

  std::vector<double> sv(cols);
  for (std::size_t c = 0; c < cols; ++c) sv[c] = std::sqrt(column_dot(c, c).real());
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

double clip_psd_eigenvalue(double value) {
  if (value >= 0.0) return value;
  if (value >= -DensityMatrix::kPsdTol) return 0.0;
  throw NumericalError("eigenvalue " + std::to_string(value) + " of a PSD operator is below -1e-10");
}

}  // namespace fiberent

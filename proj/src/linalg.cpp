#include "neardgd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "neardgd/error.hpp"

namespace neardgd {

namespace {

void require_same_dim(const DenseMatrix& a, const DenseMatrix& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch(std::string(what) + ": " + std::to_string(a.dim()) + " vs " +
                            std::to_string(b.dim()));
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : dim_(rows.size()), data_() {
  data_.reserve(dim_ * dim_);
  for (const auto& r : rows) {
    if (r.size() != dim_) throw DimensionMismatch("matrix literal must be square");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t dim) {
  DenseMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double DenseMatrix::trace() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) s += (*this)(i, i);
  return s;
}

double DenseMatrix::frobenius_norm() const { return norm2(data_); }

double DenseMatrix::asymmetry() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i + 1; j < dim_; ++j) {
      double a = (*this)(i, j), b = (*this)(j, i);
      worst = std::max(worst, std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}));
    }
  }
  return worst;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& o) {
  require_same_dim(*this, o, "matrix sum");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& o) {
  require_same_dim(*this, o, "matrix difference");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_dim(a, b, "matrix product");
  const std::size_t n = a.dim();
  DenseMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

DenseSymMatrix::DenseSymMatrix(DenseMatrix m) : m_(std::move(m)) {
  if (!m_.is_symmetric()) {
    throw ContractViolation("matrix is not symmetric (relative asymmetry " +
                            std::to_string(m_.asymmetry()) + ")");
  }
}

Spectrum sym_eigen(const DenseMatrix& a, bool want_vectors) {
  return sym_eigen(DenseSymMatrix(a), want_vectors);
}

Spectrum sym_eigen(const DenseSymMatrix& sym, bool want_vectors) {
  const std::size_t n = sym.dim();
  DenseMatrix a = sym.matrix();
  // Symmetrize exactly so rotations act on a truly symmetric array.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));
  DenseMatrix v = DenseMatrix::identity(n);

  const double target = 1e-12 * a.frobenius_norm();
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps && off_norm() > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle from the stable tan formula (Golub & Van Loan 8.5.2).
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        if (want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            const double vkp = v(k, p), vkq = v(k, q);
            v(k, p) = c * vkp - s * vkq;
            v(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
  }
  if (off_norm() > target) {
    throw ContractViolation("Jacobi eigensolver did not converge in " +
                            std::to_string(kMaxSweeps) + " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  Spectrum out;
  out.eigenvalues.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.eigenvalues[k] = a(order[k], order[k]);
  if (want_vectors) {
    out.eigenvectors = DenseMatrix(n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
    out.has_vectors = true;
  }
  return out;
}

DenseMatrix spectral_power(const Spectrum& s, double exponent) {
  if (!s.has_vectors) throw ContractViolation("spectral_power needs eigenvectors");
  const std::size_t n = s.eigenvalues.size();
  std::vector<double> f(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = s.eigenvalues[k];
    if (lam < 0.0 && exponent != std::floor(exponent))
      throw ContractViolation("fractional power of a matrix with a negative eigenvalue");
    f[k] = std::pow(lam, exponent);
  }
  DenseMatrix out(n);
  const DenseMatrix& v = s.eigenvectors;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += v(i, k) * f[k] * v(j, k);
      out(i, j) = acc;
    }
  return out;
}

double quad_form(const DenseSymMatrix& a, std::span<const double> v) {
  if (v.size() != a.dim()) {
    throw DimensionMismatch("quad_form: vector of length " + std::to_string(v.size()) +
                            " against matrix of dim " + std::to_string(a.dim()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * dot(a.matrix().row(i), v);
  return s;
}

std::vector<double> matvec(const DenseMatrix& a, std::span<const double> v) {
  if (v.size() != a.dim()) throw DimensionMismatch("matvec: dimension mismatch");
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = dot(a.row(i), v);
  return out;
}

DenseMatrix matrix_power(const DenseMatrix& a, unsigned exponent) {
  DenseMatrix out = DenseMatrix::identity(a.dim());
  for (unsigned k = 0; k < exponent; ++k) out = out * a;
  return out;
}

DenseMatrix kron_identity(const DenseMatrix& a, std::size_t p) {
  const std::size_t n = a.dim();
  DenseMatrix out(n * p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t r = 0; r < p; ++r) out(i * p + r, j * p + r) = a(i, j);
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot: length mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace neardgd

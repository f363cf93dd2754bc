#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace neardgd {

/// Square dense matrix, row-major, 64-bit. General-purpose arithmetic type;
/// symmetric data that must stay symmetric lives in DenseSymMatrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<const double> data() const { return data_; }

  DenseMatrix transpose() const;
  double trace() const;
  double frobenius_norm() const;
  /// max_ij |a_ij - a_ji| / max(1, |a_ij|)
  double asymmetry() const;
  bool is_symmetric(double tol = 1e-12) const { return asymmetry() <= tol; }

  DenseMatrix& operator+=(const DenseMatrix& o);
  DenseMatrix& operator-=(const DenseMatrix& o);
  DenseMatrix& operator*=(double s);

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(DenseMatrix a, double s) { return a *= s; }
  friend DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }
  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// DenseMatrix known to be symmetric within 1e-12 relative. Construction from
/// a non-symmetric matrix throws ContractViolation.
class DenseSymMatrix {
 public:
  DenseSymMatrix() = default;
  explicit DenseSymMatrix(DenseMatrix m);
  DenseSymMatrix(std::initializer_list<std::initializer_list<double>> rows)
      : DenseSymMatrix(DenseMatrix(rows)) {}

  std::size_t dim() const { return m_.dim(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const DenseMatrix& matrix() const { return m_; }

 private:
  DenseMatrix m_;
};

/// Eigenvalues ascending; eigenvectors (when requested) stored as the columns
/// of an orthonormal matrix, column i paired with eigenvalues[i].
struct Spectrum {
  std::vector<double> eigenvalues;
  DenseMatrix eigenvectors;
  bool has_vectors = false;

  double min() const { return eigenvalues.front(); }
  double max() const { return eigenvalues.back(); }
};

/// Full eigendecomposition by cyclic Jacobi rotations. Iterates until the
/// off-diagonal Frobenius norm is below 1e-12 * ||A||_F.
Spectrum sym_eigen(const DenseSymMatrix& a, bool want_vectors = true);
/// Validates symmetry first; throws ContractViolation otherwise.
Spectrum sym_eigen(const DenseMatrix& a, bool want_vectors = true);

/// V diag(f(lambda)) V^T with f(lambda) = lambda^exponent. Requires
/// eigenvectors; negative eigenvalues with non-integer exponent are an error.
DenseMatrix spectral_power(const Spectrum& s, double exponent);

double quad_form(const DenseSymMatrix& a, std::span<const double> v);
std::vector<double> matvec(const DenseMatrix& a, std::span<const double> v);
DenseMatrix matrix_power(const DenseMatrix& a, unsigned exponent);
/// A (x) I_p, materialized. Only for small diagnostic problems.
DenseMatrix kron_identity(const DenseMatrix& a, std::size_t p);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);

}  // namespace neardgd

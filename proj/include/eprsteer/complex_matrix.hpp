#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace eprsteer {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  /// Row-by-row literal, e.g. {{1, 0}, {0, -1}}.
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols);
  static ComplexMatrix diagonal(std::span<const cplx> diag);
  /// |v><v|
  static ComplexMatrix outer(std::span<const cplx> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  cplx trace() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  /// Largest |M_ij - conj(M_ji)|.
  double hermiticity_defect() const;
  bool is_hermitian(double tol = 1e-12) const { return square() && hermiticity_defect() <= tol; }
  /// Largest entry-wise absolute difference; matrices must agree in shape.
  double max_abs_diff(const ComplexMatrix& o) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, cplx s);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
/// Matrix product through the active SIMD kernel.
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Tr(A B) for square A, B of equal size.
cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Hermitian eigendecomposition (ascending eigenvalues); backed by Eigen.
struct HermitianEigen {
  std::vector<double> values;
  ComplexMatrix vectors;  // columns are eigenvectors
};
HermitianEigen eigh(const ComplexMatrix& m);

double min_eigenvalue(const ComplexMatrix& m);
/// Principal square root of a positive semidefinite matrix; negative
/// eigenvalues above -1e-10 are clamped to zero.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

}  // namespace eprsteer

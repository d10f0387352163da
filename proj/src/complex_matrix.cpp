#include "eprsteer/complex_matrix.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "eprsteer/errors.hpp"
#include "eprsteer/kernels.hpp"

namespace eprsteer {

namespace {

using EigenMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ArgumentError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) +
                        "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                        "x" + std::to_string(b.cols()));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw ArgumentError("ComplexMatrix: entries length " + std::to_string(data_.size()) +
                        " != rows*cols " + std::to_string(rows * cols));
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ArgumentError("ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::zeros(std::size_t rows, std::size_t cols) {
  return ComplexMatrix(rows, cols);
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const cplx> v) {
  const std::size_t n = v.size();
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = v[i] * std::conj(v[j]);
  }
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  }
  return m;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  const std::size_t n = std::min(rows_, cols_);
  for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same_shape(*this, o, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same_shape(*this, o, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

double ComplexMatrix::hermiticity_defect() const {
  if (!square()) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = i; j < cols_; ++j) {
      worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    }
  }
  return worst;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& o) const {
  require_same_shape(*this, o, "max_abs_diff");
  double worst = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    worst = std::max(worst, std::abs(data_[i] - o.data_[i]));
  }
  return worst;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ArgumentError("matrix product: inner dimensions " + std::to_string(a.cols()) +
                        " and " + std::to_string(b.rows()) + " differ");
  }
  ComplexMatrix c(a.rows(), b.cols());
  kernels::active().matmul(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
  return c;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx s = a(i, j);
      if (s == cplx{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k) {
        for (std::size_t l = 0; l < b.cols(); ++l) {
          out(i * b.rows() + k, j * b.cols() + l) = s * b(k, l);
        }
      }
    }
  }
  return out;
}

cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.square() || !b.square() || a.rows() != b.rows()) {
    throw ArgumentError("trace_product: operands must be square and equal-sized");
  }
  // Tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B^dagger_ij)
  const ComplexMatrix bd = b.adjoint();
  return kernels::active().conj_dot(a.data(), bd.data());
}

HermitianEigen eigh(const ComplexMatrix& m) {
  if (!m.square()) throw ArgumentError("eigh: matrix not square");
  const auto n = static_cast<Eigen::Index>(m.rows());
  Eigen::Map<const EigenMatrix> view(m.data().data(), n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver{Eigen::MatrixXcd(view)};
  if (solver.info() != Eigen::Success) throw NumericError("eigh: decomposition failed");
  HermitianEigen out;
  out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  out.vectors = ComplexMatrix(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out.vectors(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          solver.eigenvectors()(i, j);
    }
  }
  return out;
}

double min_eigenvalue(const ComplexMatrix& m) { return eigh(m).values.front(); }

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const HermitianEigen e = eigh(m);
  if (e.values.front() < -1e-10) {
    throw ArgumentError("psd_sqrt: matrix has eigenvalue " + std::to_string(e.values.front()));
  }
  const std::size_t n = m.rows();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = std::sqrt(std::max(0.0, e.values[k]));
    if (s == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vi = e.vectors(i, k) * s;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vi * std::conj(e.vectors(j, k));
    }
  }
  return out;
}

}  // namespace eprsteer

#pragma once

// Independent reference computations for the tests. These use plain index
// arithmetic or Eigen directly and share no code with the library routines
// they check.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <vector>

#include "eprsteer/complex_matrix.hpp"

namespace oracle {

using Mat = Eigen::MatrixXcd;
using eprsteer::cplx;

inline Mat to_eigen(const eprsteer::ComplexMatrix& m) {
  Mat out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  }
  return out;
}

inline double max_diff(const Mat& a, const eprsteer::ComplexMatrix& b) {
  return (a - to_eigen(b)).cwiseAbs().maxCoeff();
}

// Mixed-radix digits of a flat index, most significant subsystem first.
inline std::vector<std::size_t> digits(std::size_t index, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> d(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    d[k] = index % dims[k];
    index /= dims[k];
  }
  return d;
}

inline std::size_t flat(const std::vector<std::size_t>& d, const std::vector<std::size_t>& dims) {
  std::size_t i = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) i = i * dims[k] + d[k];
  return i;
}

// Sum over every index pair whose traced-out digits agree.
inline Mat partial_trace(const Mat& rho, const std::vector<std::size_t>& dims,
                         const std::vector<std::size_t>& keep) {
  std::vector<std::size_t> kd;
  for (std::size_t k : keep) kd.push_back(dims[k]);
  std::size_t n = 1;
  for (std::size_t d : kd) n *= d;
  Mat out = Mat::Zero(n, n);
  const auto total = static_cast<std::size_t>(rho.rows());
  for (std::size_t i = 0; i < total; ++i) {
    const auto di = digits(i, dims);
    for (std::size_t j = 0; j < total; ++j) {
      const auto dj = digits(j, dims);
      bool match = true;
      for (std::size_t k = 0; k < dims.size() && match; ++k) {
        bool kept = false;
        for (std::size_t q : keep) kept |= q == k;
        if (!kept && di[k] != dj[k]) match = false;
      }
      if (!match) continue;
      std::vector<std::size_t> ri, rj;
      for (std::size_t q : keep) {
        ri.push_back(di[q]);
        rj.push_back(dj[q]);
      }
      out(flat(ri, kd), flat(rj, kd)) += rho(i, j);
    }
  }
  return out;
}

inline Mat pauli(int axis) {
  Mat m(2, 2);
  if (axis == 0) m << 0, 1, 1, 0;
  if (axis == 1) m << 0, cplx(0, -1), cplx(0, 1), 0;
  if (axis == 2) m << 1, 0, 0, -1;
  return m;
}

// Singlet amplitude vector written out by hand.
inline Eigen::VectorXcd singlet() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);
  return v;
}

inline Mat werner(double p) {
  const Eigen::VectorXcd s = singlet();
  return (1.0 - p) * Mat::Identity(4, 4) / 4.0 + p * s * s.adjoint();
}

}  // namespace oracle

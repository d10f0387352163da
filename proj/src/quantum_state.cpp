#include "eprsteer/quantum_state.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "eprsteer/errors.hpp"

namespace eprsteer {

namespace {

std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

// Mixed-radix digits of a flat index, subsystem 0 most significant.
void digits_of(std::size_t index, std::span<const std::size_t> dims, std::vector<std::size_t>& out) {
  out.resize(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    out[k] = index % dims[k];
    index /= dims[k];
  }
}

bool is_projector(const ComplexMatrix& e) {
  return (e * e).max_abs_diff(e) <= 1e-12;
}

}  // namespace

QuantumState::QuantumState(std::vector<std::size_t> dims, ComplexMatrix rho)
    : QuantumState(std::move(dims), std::move(rho), true) {}

QuantumState::QuantumState(std::vector<std::size_t> dims, ComplexMatrix rho, bool check_positivity)
    : dims_(std::move(dims)), rho_(std::move(rho)) {
  if (dims_.empty()) throw ArgumentError("QuantumState: empty dimension list");
  for (std::size_t d : dims_) {
    if (d == 0) throw ArgumentError("QuantumState: zero subsystem dimension");
  }
  const std::size_t total = product(dims_);
  if (!rho_.square() || rho_.rows() != total) {
    throw ArgumentError("QuantumState: rho is " + std::to_string(rho_.rows()) + "x" +
                        std::to_string(rho_.cols()) + ", dims imply " + std::to_string(total));
  }
  const double trace_error = std::abs(rho_.trace() - cplx{1.0, 0.0});
  if (trace_error > kTraceTolerance) {
    throw ArgumentError("QuantumState: trace differs from 1 by " + std::to_string(trace_error));
  }
  const double defect = rho_.hermiticity_defect();
  if (defect > kHermitianTolerance) {
    throw ArgumentError("QuantumState: not Hermitian (defect " + std::to_string(defect) + ")");
  }
  if (check_positivity) {
    const double lo = min_eigenvalue(rho_);
    if (lo < kPositivityFloor) {
      throw ArgumentError("QuantumState: negative eigenvalue " + std::to_string(lo));
    }
  }
}

QuantumState QuantumState::pure(std::vector<std::size_t> dims, std::span<const cplx> psi) {
  double norm2 = 0.0;
  for (const cplx& z : psi) norm2 += std::norm(z);
  if (std::abs(norm2 - 1.0) > 1e-10) {
    throw ArgumentError("QuantumState::pure: squared norm is " + std::to_string(norm2));
  }
  return QuantumState(std::move(dims), ComplexMatrix::outer(psi), false);
}

QuantumState QuantumState::maximally_mixed(std::vector<std::size_t> dims) {
  const std::size_t n = product(dims);
  ComplexMatrix rho = ComplexMatrix::identity(n) * cplx(1.0 / static_cast<double>(n));
  return QuantumState(std::move(dims), std::move(rho), false);
}

QuantumState QuantumState::trusted(std::vector<std::size_t> dims, ComplexMatrix rho) {
  return QuantumState(std::move(dims), std::move(rho), false);
}

double QuantumState::purity() const { return trace_product(rho_, rho_).real(); }

QuantumState::InvariantReport QuantumState::invariants() const {
  return {std::abs(rho_.trace() - cplx{1.0, 0.0}), rho_.hermiticity_defect(),
          min_eigenvalue(rho_)};
}

QuantumState tensor(const QuantumState& a, const QuantumState& b, std::size_t max_dimension) {
  const std::size_t total = a.dimension() * b.dimension();
  if (total > max_dimension) {
    throw SizeError("tensor: total dimension " + std::to_string(total) + " exceeds cap " +
                    std::to_string(max_dimension));
  }
  std::vector<std::size_t> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return QuantumState::trusted(std::move(dims), kron(a.rho(), b.rho()));
}

QuantumState partial_trace(const QuantumState& s, std::span<const std::size_t> keep) {
  if (keep.empty()) throw ArgumentError("partial_trace: keep set is empty");
  const auto& dims = s.dims();
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t k : keep) {
    if (k >= dims.size()) {
      throw ArgumentError("partial_trace: subsystem " + std::to_string(k) + " out of range");
    }
    if (kept[k]) throw ArgumentError("partial_trace: duplicate subsystem " + std::to_string(k));
    kept[k] = true;
  }

  std::vector<std::size_t> kept_dims;
  std::vector<std::size_t> traced_dims;
  for (std::size_t k = 0; k < dims.size(); ++k) (kept[k] ? kept_dims : traced_dims).push_back(k);
  std::size_t kd = 1, td = 1;
  for (std::size_t k : kept_dims) kd *= dims[k];
  for (std::size_t k : traced_dims) td *= dims[k];

  // full_index[kr * td + t]
  std::vector<std::size_t> full_index(kd * td);
  std::vector<std::size_t> digit;
  for (std::size_t i = 0; i < s.dimension(); ++i) {
    digits_of(i, dims, digit);
    std::size_t kr = 0, t = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      if (kept[k]) {
        kr = kr * dims[k] + digit[k];
      } else {
        t = t * dims[k] + digit[k];
      }
    }
    full_index[kr * td + t] = i;
  }

  const ComplexMatrix& rho = s.rho();
  ComplexMatrix out(kd, kd);
  for (std::size_t r = 0; r < kd; ++r) {
    for (std::size_t c = 0; c < kd; ++c) {
      cplx acc = 0.0;
      for (std::size_t t = 0; t < td; ++t) acc += rho(full_index[r * td + t], full_index[c * td + t]);
      out(r, c) = acc;
    }
  }
  std::vector<std::size_t> out_dims;
  for (std::size_t k : kept_dims) out_dims.push_back(dims[k]);
  return QuantumState::trusted(std::move(out_dims), std::move(out));
}

QuantumState partial_trace(const QuantumState& s, std::initializer_list<std::size_t> keep) {
  return partial_trace(s, std::span<const std::size_t>(keep.begin(), keep.size()));
}

QuantumState reorder(const QuantumState& s, std::span<const std::size_t> order) {
  const auto& dims = s.dims();
  if (order.size() != dims.size()) throw ArgumentError("reorder: permutation has wrong length");
  std::vector<bool> seen(dims.size(), false);
  for (std::size_t k : order) {
    if (k >= dims.size() || seen[k]) throw ArgumentError("reorder: not a permutation");
    seen[k] = true;
  }
  std::vector<std::size_t> new_dims(dims.size());
  for (std::size_t k = 0; k < order.size(); ++k) new_dims[k] = dims[order[k]];

  const std::size_t n = s.dimension();
  std::vector<std::size_t> new_index(n);
  std::vector<std::size_t> digit;
  for (std::size_t i = 0; i < n; ++i) {
    digits_of(i, dims, digit);
    std::size_t j = 0;
    for (std::size_t k = 0; k < order.size(); ++k) j = j * new_dims[k] + digit[order[k]];
    new_index[i] = j;
  }
  ComplexMatrix out(n, n);
  const ComplexMatrix& rho = s.rho();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(new_index[i], new_index[j]) = rho(i, j);
  }
  return QuantumState::trusted(std::move(new_dims), std::move(out));
}

QuantumState reorder(const QuantumState& s, std::initializer_list<std::size_t> order) {
  return reorder(s, std::span<const std::size_t>(order.begin(), order.size()));
}

double expectation(const QuantumState& s, const ComplexMatrix& obs) {
  if (!obs.square() || obs.rows() != s.dimension()) {
    throw ArgumentError("expectation: observable is " + std::to_string(obs.rows()) + "x" +
                        std::to_string(obs.cols()) + ", state dimension " +
                        std::to_string(s.dimension()));
  }
  if (obs.hermiticity_defect() > 1e-10) throw ArgumentError("expectation: observable not Hermitian");
  const cplx v = trace_product(s.rho(), obs);
  if (std::abs(v.imag()) > 1e-10) {
    throw NumericError("expectation: imaginary residue " + std::to_string(v.imag()));
  }
  return v.real();
}

double probability(const QuantumState& s, const ComplexMatrix& effect) {
  if (!effect.square() || effect.rows() != s.dimension()) {
    throw ArgumentError("probability: effect dimension mismatch");
  }
  return trace_product(s.rho(), effect).real();
}

Projection project(const QuantumState& s, const ComplexMatrix& effect) {
  if (!effect.square() || effect.rows() != s.dimension()) {
    throw ArgumentError("project: effect dimension mismatch");
  }
  if (effect.hermiticity_defect() > 1e-10) throw ArgumentError("project: effect not Hermitian");
  const bool projector = is_projector(effect);
  if (!projector && min_eigenvalue(effect) < kPositivityFloor) {
    throw ArgumentError("project: effect not positive semidefinite");
  }
  const double p = trace_product(s.rho(), effect).real();
  if (p < 1e-14) throw ZeroProbabilityError("project: outcome has probability " + std::to_string(p));
  const ComplexMatrix k = projector ? effect : psd_sqrt(effect);
  ComplexMatrix post = k * s.rho() * k.adjoint();
  post *= cplx(1.0 / p);
  // Symmetrise away the roundoff of the two products.
  post = (post + post.adjoint()) * cplx(0.5);
  return {p, QuantumState::trusted(s.dims(), std::move(post))};
}

ComplexMatrix embed(const ComplexMatrix& op, std::size_t subsystem,
                    std::span<const std::size_t> dims) {
  return embed_block(op, subsystem, 1, dims);
}

ComplexMatrix embed_block(const ComplexMatrix& op, std::size_t first, std::size_t count,
                          std::span<const std::size_t> dims) {
  if (count == 0 || first + count > dims.size()) throw ArgumentError("embed: subsystem out of range");
  const std::size_t left = product(dims.subspan(0, first));
  const std::size_t mid = product(dims.subspan(first, count));
  const std::size_t right = product(dims.subspan(first + count));
  if (!op.square() || op.rows() != mid) {
    throw ArgumentError("embed: operator is " + std::to_string(op.rows()) + "x" +
                        std::to_string(op.cols()) + ", subsystem block dimension " +
                        std::to_string(mid));
  }
  ComplexMatrix out = op;
  if (left > 1) out = kron(ComplexMatrix::identity(left), out);
  if (right > 1) out = kron(out, ComplexMatrix::identity(right));
  return out;
}

QuantumState apply_kraus(const QuantumState& s, std::span<const ComplexMatrix> kraus,
                         std::size_t subsystem) {
  if (subsystem >= s.subsystem_count()) throw ArgumentError("apply_kraus: subsystem out of range");
  ComplexMatrix out(s.dimension(), s.dimension());
  for (const ComplexMatrix& k : kraus) {
    const ComplexMatrix full = embed(k, subsystem, s.dims());
    out += full * s.rho() * full.adjoint();
  }
  out = (out + out.adjoint()) * cplx(0.5);
  return QuantumState::trusted(s.dims(), std::move(out));
}

QuantumState apply_unitary(const QuantumState& s, const ComplexMatrix& u, std::size_t subsystem) {
  const ComplexMatrix ops[] = {u};
  return apply_kraus(s, ops, subsystem);
}

double trace_distance(const QuantumState& a, const QuantumState& b) {
  if (a.dimension() != b.dimension()) throw ArgumentError("trace_distance: dimension mismatch");
  const HermitianEigen e = eigh(a.rho() - b.rho());
  double sum = 0.0;
  for (double v : e.values) sum += std::abs(v);
  return 0.5 * sum;
}

}  // namespace eprsteer

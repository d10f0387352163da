#include "eprsteer/kernels.hpp"

namespace eprsteer::kernels::scalar {

namespace {
// Below this the conditioning branch has vanishing weight and contributes 0.
constexpr double kBranchFloor = 1e-14;
}  // namespace

cplx conj_dot(std::span<const cplx> a, std::span<const cplx> b) {
  double re = 0.0;
  double im = 0.0;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].imag() * b[i].real() - a[i].real() * b[i].imag();
  }
  return {re, im};
}

void matmul(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c,
            std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m * n; ++i) c[i] = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    cplx* crow = c.data() + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const cplx s = a[i * k + p];
      if (s == cplx{}) continue;
      const cplx* brow = b.data() + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += s * brow[j];
    }
  }
}

void direction_scan(const DirectionScanInput& in, std::span<const double> x,
                    std::span<const double> y, std::span<const double> z,
                    std::span<double> out) {
  const double alpha = in.alpha;
  const double ea = in.eta_steered;
  const double eb = in.eta_steerer;
  const double lost = (1.0 - eb) * alpha * alpha;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double beta = in.b[0] * x[i] + in.b[1] * y[i] + in.b[2] * z[i];
    const double c = in.t[0] * x[i] + in.t[1] * y[i] + in.t[2] * z[i];
    const double up = 1.0 + beta;
    const double down = 1.0 - beta;
    const double sp = alpha + c;
    const double sm = alpha - c;
    double branches = 0.0;
    if (up > kBranchFloor) branches += sp * sp / up;
    if (down > kBranchFloor) branches += sm * sm / down;
    const double explained = lost + 0.5 * eb * branches;
    out[i] = ea - ea * ea * explained;
  }
}

}  // namespace eprsteer::kernels::scalar

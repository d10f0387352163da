// Compiled with -mavx2 -mfma; only reached after a runtime CPUID check.
#include <immintrin.h>

#include "eprsteer/kernels.hpp"

namespace eprsteer::kernels::avx2 {

namespace {
constexpr double kBranchFloor = 1e-14;

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}
}  // namespace

cplx conj_dot(std::span<const cplx> a, std::span<const cplx> b) {
  const std::size_t n = a.size();
  const auto* pa = reinterpret_cast<const double*>(a.data());
  const auto* pb = reinterpret_cast<const double*>(b.data());
  // lanes: [re0, im0, re1, im1]
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    const __m256d vb_sw = _mm256_permute_pd(vb, 0b0101);
    acc_re = _mm256_fmadd_pd(va, vb, acc_re);     // ar*br, ai*bi
    acc_im = _mm256_fmadd_pd(va, vb_sw, acc_im);  // ar*bi, ai*br
  }
  double re = hsum(acc_re);
  alignas(32) double im_lanes[4];
  _mm256_store_pd(im_lanes, acc_im);
  double im = (im_lanes[1] - im_lanes[0]) + (im_lanes[3] - im_lanes[2]);
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].imag() * b[i].real() - a[i].real() * b[i].imag();
  }
  return {re, im};
}

void matmul(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c,
            std::size_t m, std::size_t k, std::size_t n) {
  auto* pc = reinterpret_cast<double*>(c.data());
  const auto* pb = reinterpret_cast<const double*>(b.data());
  for (std::size_t i = 0; i < m * n; ++i) c[i] = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = pc + 2 * i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const cplx s = a[i * k + p];
      if (s == cplx{}) continue;
      const __m256d sr = _mm256_set1_pd(s.real());
      const __m256d si = _mm256_set1_pd(s.imag());
      const double* brow = pb + 2 * p * n;
      std::size_t j = 0;
      for (; j + 2 <= n; j += 2) {
        const __m256d vb = _mm256_loadu_pd(brow + 2 * j);
        const __m256d vb_sw = _mm256_permute_pd(vb, 0b0101);
        // even lanes: sr*br - si*bi, odd lanes: sr*bi + si*br
        const __m256d prod = _mm256_fmaddsub_pd(sr, vb, _mm256_mul_pd(si, vb_sw));
        _mm256_storeu_pd(crow + 2 * j, _mm256_add_pd(_mm256_loadu_pd(crow + 2 * j), prod));
      }
      for (; j < n; ++j) {
        const cplx bj{brow[2 * j], brow[2 * j + 1]};
        const cplx r = s * bj;
        crow[2 * j] += r.real();
        crow[2 * j + 1] += r.imag();
      }
    }
  }
}

void direction_scan(const DirectionScanInput& in, std::span<const double> x,
                    std::span<const double> y, std::span<const double> z,
                    std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half_eb = _mm256_set1_pd(0.5 * in.eta_steerer);
  const __m256d floor = _mm256_set1_pd(kBranchFloor);
  const __m256d alpha = _mm256_set1_pd(in.alpha);
  const __m256d ea = _mm256_set1_pd(in.eta_steered);
  const __m256d ea2 = _mm256_set1_pd(in.eta_steered * in.eta_steered);
  const __m256d lost = _mm256_set1_pd((1.0 - in.eta_steerer) * in.alpha * in.alpha);
  const __m256d bx = _mm256_set1_pd(in.b[0]), by = _mm256_set1_pd(in.b[1]),
                bz = _mm256_set1_pd(in.b[2]);
  const __m256d tx = _mm256_set1_pd(in.t[0]), ty = _mm256_set1_pd(in.t[1]),
                tz = _mm256_set1_pd(in.t[2]);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x.data() + i);
    const __m256d vy = _mm256_loadu_pd(y.data() + i);
    const __m256d vz = _mm256_loadu_pd(z.data() + i);
    const __m256d beta = _mm256_fmadd_pd(bz, vz, _mm256_fmadd_pd(by, vy, _mm256_mul_pd(bx, vx)));
    const __m256d c = _mm256_fmadd_pd(tz, vz, _mm256_fmadd_pd(ty, vy, _mm256_mul_pd(tx, vx)));
    const __m256d up = _mm256_add_pd(one, beta);
    const __m256d down = _mm256_sub_pd(one, beta);
    const __m256d sp = _mm256_add_pd(alpha, c);
    const __m256d sm = _mm256_sub_pd(alpha, c);
    const __m256d up_ok = _mm256_cmp_pd(up, floor, _CMP_GT_OQ);
    const __m256d down_ok = _mm256_cmp_pd(down, floor, _CMP_GT_OQ);
    // Masked lanes divide by 1 and are zeroed afterwards.
    const __m256d up_safe = _mm256_blendv_pd(one, up, up_ok);
    const __m256d down_safe = _mm256_blendv_pd(one, down, down_ok);
    const __m256d tp = _mm256_and_pd(_mm256_div_pd(_mm256_mul_pd(sp, sp), up_safe), up_ok);
    const __m256d tm = _mm256_and_pd(_mm256_div_pd(_mm256_mul_pd(sm, sm), down_safe), down_ok);
    const __m256d explained = _mm256_fmadd_pd(half_eb, _mm256_add_pd(tp, tm), lost);
    _mm256_storeu_pd(out.data() + i, _mm256_fnmadd_pd(ea2, explained, ea));
  }
  if (i < n) {
    scalar::direction_scan(in, x.subspan(i), y.subspan(i), z.subspan(i), out.subspan(i));
  }
}

}  // namespace eprsteer::kernels::avx2

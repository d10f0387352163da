#include <doctest.h>

#include <cmath>
#include <vector>

#include "eprsteer/kernels.hpp"
#include "eprsteer/observables.hpp"
#include "eprsteer/random_states.hpp"
#include "eprsteer/steering.hpp"

using namespace eprsteer;
namespace k = eprsteer::kernels;

namespace {

std::vector<cplx> random_vec(std::size_t n, Rng& rng) {
  std::vector<cplx> v(n);
  for (auto& x : v) x = {rng.normal(), rng.normal()};
  return v;
}

k::DirectionScanInput random_scan_input(Rng& rng) {
  const QuantumState s = haar_mixed({2, 2}, 1 + rng.below(4), rng);
  const BlochData b = bloch_data(s);
  const SpinDirection u = SpinDirection::normalized(rng.normal(), rng.normal(), rng.normal());
  k::DirectionScanInput in;
  const auto& v = u.vec();
  for (int i = 0; i < 3; ++i) in.alpha += v[i] * b.steered[i];
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) in.t[j] += v[i] * b.correlation[i][j];
    in.b[j] = b.steerer[j];
  }
  in.eta_steered = rng.uniform();
  in.eta_steerer = rng.uniform();
  return in;
}

}  // namespace

TEST_CASE("scalar kernels are always available") {
  CHECK(k::isa_available(k::Isa::Scalar));
  CHECK(k::table(k::Isa::Scalar).isa == k::Isa::Scalar);
  CHECK(k::isa_name(k::active_isa()).size() > 0);
}

TEST_CASE("scalar conj_dot and matmul match direct loops") {
  Rng rng(1);
  const auto a = random_vec(7, rng), b = random_vec(7, rng);
  cplx ref{};
  for (std::size_t i = 0; i < 7; ++i) ref += a[i] * std::conj(b[i]);
  CHECK(std::abs(k::scalar::conj_dot(a, b) - ref) < 1e-13);

  const auto x = random_vec(3 * 5, rng), y = random_vec(5 * 4, rng);
  std::vector<cplx> c(3 * 4);
  k::scalar::matmul(x, y, c, 3, 5, 4);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      cplx s{};
      for (std::size_t q = 0; q < 5; ++q) s += x[i * 5 + q] * y[q * 4 + j];
      CHECK(std::abs(c[i * 4 + j] - s) < 1e-13);
    }
  }
}

TEST_CASE("scalar direction scan matches the effect-based inference variance") {
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const QuantumState s = haar_mixed({2, 2}, 1 + trial % 4, rng);
    const SpinDirection u = SpinDirection::normalized(rng.normal(), rng.normal(), rng.normal());
    const double ea = rng.uniform(), eb = rng.uniform();
    const BlochData bd = bloch_data(s);
    std::vector<double> xs, ys, zs;
    std::vector<SpinDirection> dirs;
    for (int i = 0; i < 9; ++i) {
      dirs.push_back(SpinDirection::normalized(rng.normal(), rng.normal(), rng.normal()));
      xs.push_back(dirs.back().x());
      ys.push_back(dirs.back().y());
      zs.push_back(dirs.back().z());
    }
    k::DirectionScanInput in;
    for (int i = 0; i < 3; ++i) in.alpha += u.vec()[i] * bd.steered[i];
    for (int j = 0; j < 3; ++j) {
      for (int i = 0; i < 3; ++i) in.t[j] += u.vec()[i] * bd.correlation[i][j];
      in.b[j] = bd.steerer[j];
    }
    in.eta_steered = ea;
    in.eta_steerer = eb;
    std::vector<double> out(9);
    k::scalar::direction_scan(in, xs, ys, zs, out);
    for (int i = 0; i < 9; ++i) {
      const double ref = inference_variance(s, lossy_spin_measurement(u, ea),
                                            lossy_spin_measurement(dirs[i], eb));
      CHECK(out[i] == doctest::Approx(ref).epsilon(1e-11));
    }
  }
}

#if defined(EPRSTEER_HAVE_AVX2)
TEST_CASE("AVX2 kernels agree with the scalar reference") {
  if (!k::isa_available(k::Isa::Avx2)) {
    MESSAGE("AVX2 not supported on this CPU; equivalence not exercised");
    return;
  }
  Rng rng(77);
  SUBCASE("conj_dot over lengths with every tail size") {
    for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 16, 31, 256, 1023}) {
      const auto a = random_vec(n, rng), b = random_vec(n, rng);
      const cplx s = k::scalar::conj_dot(a, b), v = k::avx2::conj_dot(a, b);
      CHECK(std::abs(s - v) <= 1e-13 * (1.0 + static_cast<double>(n)));
    }
  }
  SUBCASE("matmul over odd shapes") {
    for (auto [m, q, n] : std::vector<std::array<std::size_t, 3>>{
             {1, 1, 1}, {2, 3, 5}, {4, 4, 4}, {7, 3, 9}, {16, 16, 16}, {5, 17, 3}, {33, 8, 31}}) {
      const auto a = random_vec(m * q, rng), b = random_vec(q * n, rng);
      std::vector<cplx> cs(m * n), cv(m * n, cplx{9.0, 9.0});
      k::scalar::matmul(a, b, cs, m, q, n);
      k::avx2::matmul(a, b, cv, m, q, n);
      for (std::size_t i = 0; i < m * n; ++i) {
        CHECK(std::abs(cs[i] - cv[i]) <= 1e-13 * (1.0 + static_cast<double>(q)));
      }
    }
  }
  SUBCASE("direction scan, including degenerate steerer branches") {
    for (std::size_t n : {1, 3, 4, 5, 8, 13, 256, 1001}) {
      k::DirectionScanInput in = random_scan_input(rng);
      if (n == 13) {
        // Pure product steerer: 1 - beta vanishes along b.
        in.b[0] = 0.0;
        in.b[1] = 0.0;
        in.b[2] = 1.0;
      }
      std::vector<double> x(n), y(n), z(n), os(n), ov(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto d = i % 4 == 0 ? SpinDirection::Z()
                                  : SpinDirection::normalized(rng.normal(), rng.normal(), rng.normal());
        x[i] = d.x();
        y[i] = d.y();
        z[i] = d.z();
      }
      k::scalar::direction_scan(in, x, y, z, os);
      k::avx2::direction_scan(in, x, y, z, ov);
      for (std::size_t i = 0; i < n; ++i) CHECK(os[i] == doctest::Approx(ov[i]).epsilon(1e-12));
    }
  }
}
#endif

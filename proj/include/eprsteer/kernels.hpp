#pragma once

// Data-parallel inner loops. Every kernel has a portable scalar reference
// implementation and, on x86-64, an AVX2/FMA variant. The variant used by the
// library is chosen once at runtime from CPUID; setting EPRSTEER_FORCE_SCALAR=1
// in the environment pins the scalar path.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace eprsteer::kernels {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// Best instruction set both compiled in and supported by this CPU.
Isa detected_isa();
/// detected_isa() unless EPRSTEER_FORCE_SCALAR is set.
Isa active_isa();
bool isa_available(Isa isa);

// Inputs to the steerer-direction scan for a two-qubit state, built from its
// Bloch data. For steered direction u and candidate steerer directions v_k:
//   alpha  = <sigma_u (x) I>
//   beta_k = b . v_k          (b: steerer Bloch vector)
//   c_k    = t . v_k          (t = T^T u, T the correlation tensor)
// and the kernel writes the inference variance of the lossy steered spin
// conditioned on the lossy steerer spin along v_k.
struct DirectionScanInput {
  double alpha = 0.0;
  double t[3] = {0.0, 0.0, 0.0};
  double b[3] = {0.0, 0.0, 0.0};
  double eta_steered = 1.0;
  double eta_steerer = 1.0;
};

struct KernelTable {
  Isa isa;
  // sum_k a_k * conj(b_k)
  cplx (*conj_dot)(std::span<const cplx> a, std::span<const cplx> b);
  // c (m x n) = a (m x k) * b (k x n), row-major, c overwritten
  void (*matmul)(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c,
                 std::size_t m, std::size_t k, std::size_t n);
  // out[i] = inference variance for direction (x[i], y[i], z[i])
  void (*direction_scan)(const DirectionScanInput& in, std::span<const double> x,
                         std::span<const double> y, std::span<const double> z,
                         std::span<double> out);
};

/// Kernel table for a specific ISA; throws ArgumentError if not available.
const KernelTable& table(Isa isa);
/// Table for active_isa(), resolved once.
const KernelTable& active();

namespace scalar {
cplx conj_dot(std::span<const cplx> a, std::span<const cplx> b);
void matmul(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c,
            std::size_t m, std::size_t k, std::size_t n);
void direction_scan(const DirectionScanInput& in, std::span<const double> x,
                    std::span<const double> y, std::span<const double> z,
                    std::span<double> out);
}  // namespace scalar

#if defined(EPRSTEER_HAVE_AVX2)
namespace avx2 {
cplx conj_dot(std::span<const cplx> a, std::span<const cplx> b);
void matmul(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c,
            std::size_t m, std::size_t k, std::size_t n);
void direction_scan(const DirectionScanInput& in, std::span<const double> x,
                    std::span<const double> y, std::span<const double> z,
                    std::span<double> out);
}  // namespace avx2
#endif

}  // namespace eprsteer::kernels

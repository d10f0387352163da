#include <cstdlib>
#include <string>

#include "eprsteer/errors.hpp"
#include "eprsteer/kernels.hpp"

namespace eprsteer::kernels {

namespace {

constexpr KernelTable kScalarTable{Isa::Scalar, &scalar::conj_dot, &scalar::matmul,
                                   &scalar::direction_scan};
#if defined(EPRSTEER_HAVE_AVX2)
constexpr KernelTable kAvx2Table{Isa::Avx2, &avx2::conj_dot, &avx2::matmul,
                                 &avx2::direction_scan};
#endif

bool force_scalar() {
  const char* v = std::getenv("EPRSTEER_FORCE_SCALAR");
  return v != nullptr && *v != '\0' && std::string(v) != "0";
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(EPRSTEER_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() { return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar; }

Isa active_isa() { return force_scalar() ? Isa::Scalar : detected_isa(); }

const KernelTable& table(Isa isa) {
  if (!isa_available(isa)) {
    throw ArgumentError("kernel ISA not available: " + std::string(isa_name(isa)));
  }
#if defined(EPRSTEER_HAVE_AVX2)
  if (isa == Isa::Avx2) return kAvx2Table;
#endif
  return kScalarTable;
}

const KernelTable& active() {
  static const KernelTable& resolved = table(active_isa());
  return resolved;
}

}  // namespace eprsteer::kernels

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "txguard/kernels/kernels.hpp"

namespace txguard::kernels {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

bool available(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!available(isa)) throw std::invalid_argument("kernel variant unavailable: " + std::string(to_string(isa)));
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::kAvx2:
      return avx2::kTable;
#endif
#if defined(__aarch64__)
    case Isa::kNeon:
      return neon::kTable;
#endif
    default:
      return scalar::kTable;
  }
}

const KernelTable& active() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* force = std::getenv("TXGUARD_FORCE_SCALAR");
    if (force && std::string(force) == "1") return scalar::kTable;
    if (available(Isa::kAvx2)) return table(Isa::kAvx2);
    if (available(Isa::kNeon)) return table(Isa::kNeon);
    return scalar::kTable;
  }();
  return chosen;
}

}  // namespace txguard::kernels

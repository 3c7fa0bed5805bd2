#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops with a scalar reference and SIMD variants.
// Every variant must produce bit-identical results to the scalar kernel: the
// column reductions vectorize across columns (each column is still reduced in
// row order) and the split scorer uses only correctly-rounded add/sub/mul/div.

namespace txguard::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;

  // out[c] = sum over r of data[r * stride + c], for c in [0, cols).
  void (*column_sum)(const double* data, std::size_t rows, std::size_t stride, std::size_t cols, double* out);
  // Requires rows >= 1.
  void (*column_min)(const double* data, std::size_t rows, std::size_t stride, std::size_t cols, double* out);
  void (*column_max)(const double* data, std::size_t rows, std::size_t stride, std::size_t cols, double* out);

  // Gini split score for n candidate cut points. With left class weights
  // (lp, ln) and right weights (rp, rn) = (total_pos - lp, total_neg - ln):
  //   out[i] = (lp^2 + ln^2) / (lp + ln) + (rp^2 + rn^2) / (rp + rn)
  // Higher is better. Both sides must carry positive weight.
  void (*gini_split_scores)(const double* left_pos, const double* left_neg, std::size_t n, double total_pos,
                            double total_neg, double* out);
};

// True if this binary has the variant compiled in and the CPU supports it.
bool available(Isa isa);
// Throws std::invalid_argument if the variant is unavailable.
const KernelTable& table(Isa isa);
// Best available variant; TXGUARD_FORCE_SCALAR=1 pins the scalar kernels.
const KernelTable& active();

namespace scalar {
extern const KernelTable kTable;
}
#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
extern const KernelTable kTable;
}
#endif
#if defined(__aarch64__)
namespace neon {
extern const KernelTable kTable;
}
#endif

}  // namespace txguard::kernels

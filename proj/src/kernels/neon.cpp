// AArch64 only; NEON is part of the baseline ISA there.
#include <arm_neon.h>

#include "txguard/kernels/kernels.hpp"

namespace txguard::kernels::neon {

namespace {

void column_sum(const double* data, std::size_t rows, std::size_t stride, std::size_t cols, double* out) {
  std::size_t c = 0;
  for (; c + 2 <= cols; c += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t r = 0; r < rows; ++r) acc = vaddq_f64(acc, vld1q_f64(data + r * stride + c));
    vst1q_f64(out + c, acc);
  }
  for (; c < cols; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < rows; ++r) s += data[r * stride + c];
    out[c] = s;
  }
}

// FMIN orders -0 below +0 and propagates NaN; compare+select matches the scalar kernel.
void column_min(const double* data, std::size_t rows, std::size_t stride, std::size_t cols, double* out) {
  std::size_t c = 0;
  for (; c + 2 <= cols; c += 2) {
    float64x2_t m = vld1q_f64(data + c);
    for (std::size_t r = 1; r < rows; ++r) {
      float64x2_t x = vld1q_f64(data + r * stride + c);
      m = vbslq_f64(vcltq_f64(x, m), x, m);
    }
    vst1q_f64(out + c, m);
  }
  for (; c < cols; ++c) {
    double m = data[c];
    for (std::size_t r = 1; r < rows; ++r) {
      double x = data[r * stride + c];
      m = x < m ? x : m;
    }
    out[c] = m;
  }
}

void column_max(const double* data, std::size_t rows, std::size_t stride, std::size_t cols, double* out) {
  std::size_t c = 0;
  for (; c + 2 <= cols; c += 2) {
    float64x2_t m = vld1q_f64(data + c);
    for (std::size_t r = 1; r < rows; ++r) {
      float64x2_t x = vld1q_f64(data + r * stride + c);
      m = vbslq_f64(vcgtq_f64(x, m), x, m);
    }
    vst1q_f64(out + c, m);
  }
  for (; c < cols; ++c) {
    double m = data[c];
    for (std::size_t r = 1; r < rows; ++r) {
      double x = data[r * stride + c];
      m = x > m ? x : m;
    }
    out[c] = m;
  }
}

void gini_split_scores(const double* left_pos, const double* left_neg, std::size_t n, double total_pos,
                       double total_neg, double* out) {
  const float64x2_t tp = vdupq_n_f64(total_pos);
  const float64x2_t tn = vdupq_n_f64(total_neg);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t lp = vld1q_f64(left_pos + i);
    float64x2_t ln = vld1q_f64(left_neg + i);
    float64x2_t rp = vsubq_f64(tp, lp);
    float64x2_t rn = vsubq_f64(tn, ln);
    float64x2_t left = vdivq_f64(vaddq_f64(vmulq_f64(lp, lp), vmulq_f64(ln, ln)), vaddq_f64(lp, ln));
    float64x2_t right = vdivq_f64(vaddq_f64(vmulq_f64(rp, rp), vmulq_f64(rn, rn)), vaddq_f64(rp, rn));
    vst1q_f64(out + i, vaddq_f64(left, right));
  }
  for (; i < n; ++i) {
    double lp = left_pos[i], ln = left_neg[i];
    double rp = total_pos - lp, rn = total_neg - ln;
    out[i] = (lp * lp + ln * ln) / (lp + ln) + (rp * rp + rn * rn) / (rp + rn);
  }
}

}  // namespace

const KernelTable kTable = {Isa::kNeon, column_sum, column_min, column_max, gini_split_scores};

}  // namespace txguard::kernels::neon

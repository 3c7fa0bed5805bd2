// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include "txguard/kernels/kernels.hpp"

namespace txguard::kernels::avx2 {

namespace {

void column_sum(const double* data, std::size_t rows, std::size_t stride, std::size_t cols, double* out) {
  std::size_t c = 0;
  for (; c + 4 <= cols; c += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t r = 0; r < rows; ++r) acc = _mm256_add_pd(acc, _mm256_loadu_pd(data + r * stride + c));
    _mm256_storeu_pd(out + c, acc);
  }
  for (; c < cols; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < rows; ++r) s += data[r * stride + c];
    out[c] = s;
  }
}

// _mm256_min_pd(a, b) is (a < b ? a : b) lane-wise, matching the scalar
// select exactly, including signed zeros.
void column_min(const double* data, std::size_t rows, std::size_t stride, std::size_t cols, double* out) {
  std::size_t c = 0;
  for (; c + 4 <= cols; c += 4) {
    __m256d m = _mm256_loadu_pd(data + c);
    for (std::size_t r = 1; r < rows; ++r) m = _mm256_min_pd(_mm256_loadu_pd(data + r * stride + c), m);
    _mm256_storeu_pd(out + c, m);
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
  for (; c + 4 <= cols; c += 4) {
    __m256d m = _mm256_loadu_pd(data + c);
    for (std::size_t r = 1; r < rows; ++r) m = _mm256_max_pd(_mm256_loadu_pd(data + r * stride + c), m);
    _mm256_storeu_pd(out + c, m);
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
  const __m256d tp = _mm256_set1_pd(total_pos);
  const __m256d tn = _mm256_set1_pd(total_neg);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d lp = _mm256_loadu_pd(left_pos + i);
    __m256d ln = _mm256_loadu_pd(left_neg + i);
    __m256d rp = _mm256_sub_pd(tp, lp);
    __m256d rn = _mm256_sub_pd(tn, ln);
    __m256d left = _mm256_div_pd(_mm256_add_pd(_mm256_mul_pd(lp, lp), _mm256_mul_pd(ln, ln)), _mm256_add_pd(lp, ln));
    __m256d right = _mm256_div_pd(_mm256_add_pd(_mm256_mul_pd(rp, rp), _mm256_mul_pd(rn, rn)), _mm256_add_pd(rp, rn));
    _mm256_storeu_pd(out + i, _mm256_add_pd(left, right));
  }
  for (; i < n; ++i) {
    double lp = left_pos[i], ln = left_neg[i];
    double rp = total_pos - lp, rn = total_neg - ln;
    out[i] = (lp * lp + ln * ln) / (lp + ln) + (rp * rp + rn * rn) / (rp + rn);
  }
}

}  // namespace

const KernelTable kTable = {Isa::kAvx2, column_sum, column_min, column_max, gini_split_scores};

}  // namespace txguard::kernels::avx2

#include "txguard/kernels/kernels.hpp"

namespace txguard::kernels::scalar {

namespace {

void column_sum(const double* data, std::size_t rows, std::size_t stride, std::size_t cols, double* out) {
  for (std::size_t c = 0; c < cols; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < rows; ++r) s += data[r * stride + c];
    out[c] = s;
  }
}

void column_min(const double* data, std::size_t rows, std::size_t stride, std::size_t cols, double* out) {
  for (std::size_t c = 0; c < cols; ++c) {
    double m = data[c];
    for (std::size_t r = 1; r < rows; ++r) {
      double x = data[r * stride + c];
      m = x < m ? x : m;
    }
    out[c] = m;
  }
}

void column_max(const double* data, std::size_t rows, std::size_t stride, std::size_t cols, double* out) {
  for (std::size_t c = 0; c < cols; ++c) {
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
  for (std::size_t i = 0; i < n; ++i) {
    double lp = left_pos[i], ln = left_neg[i];
    double rp = total_pos - lp, rn = total_neg - ln;
    out[i] = (lp * lp + ln * ln) / (lp + ln) + (rp * rp + rn * rn) / (rp + rn);
  }
}

}  // namespace

const KernelTable kTable = {Isa::kScalar, column_sum, column_min, column_max, gini_split_scores};

}  // namespace txguard::kernels::scalar

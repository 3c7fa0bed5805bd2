#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <vector>

#include "txguard/kernels/kernels.hpp"

using namespace txguard::kernels;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<Isa> simd_variants() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::kAvx2, Isa::kNeon})
    if (available(isa)) out.push_back(isa);
  return out;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("scalar reference values") {
    const double data[] = {1, 5, -2, 3, 4, 0.5, 7, -1, 2};  // 3 rows x 3 cols
    double out[3];
    scalar::kTable.column_sum(data, 3, 3, 3, out);
    CHECK(out[0] == 11);
    CHECK(out[1] == 8);
    CHECK(out[2] == 0.5);
    scalar::kTable.column_min(data, 3, 3, 3, out);
    CHECK(out[0] == 1);
    CHECK(out[1] == -1);
    CHECK(out[2] == -2);
    scalar::kTable.column_max(data, 3, 3, 3, out);
    CHECK(out[0] == 7);
    CHECK(out[1] == 5);
    CHECK(out[2] == 2);

    const double lp[] = {1, 2}, ln[] = {0, 3};
    double g[2];
    scalar::kTable.gini_split_scores(lp, ln, 2, 3, 3, g);
    CHECK(g[0] == doctest::Approx(1.0 + (4.0 + 9.0) / 5.0));
    CHECK(g[1] == doctest::Approx((4.0 + 9.0) / 5.0 + 1.0));
  }

  TEST_CASE("dispatch") {
    CHECK(available(Isa::kScalar));
    CHECK(&table(Isa::kScalar) == &scalar::kTable);
    CHECK(available(active().isa));
    if (!available(Isa::kNeon)) CHECK_THROWS(table(Isa::kNeon));
  }

  TEST_CASE("SIMD variants are bit-identical to scalar") {
    const auto variants = simd_variants();
    if (variants.empty()) MESSAGE("no SIMD variant available on this machine; equivalence not exercised");
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> val(-1e6, 1e6);
    for (Isa isa : variants) {
      const KernelTable& k = table(isa);
      for (int iter = 0; iter < 400; ++iter) {
        const std::size_t rows = 1 + rng() % 40, cols = 1 + rng() % 23, stride = cols + rng() % 4;
        std::vector<double> data(rows * stride);
        for (auto& v : data) {
          switch (rng() % 8) {
            case 0: v = 0.0; break;
            case 1: v = -0.0; break;
            case 2: v = std::ldexp(val(rng), -1070); break;  // subnormal range
            case 3: v = static_cast<double>(rng() % 5); break;  // ties
            default: v = val(rng);
          }
        }
        std::vector<double> a(cols), b(cols);
        scalar::kTable.column_sum(data.data(), rows, stride, cols, a.data());
        k.column_sum(data.data(), rows, stride, cols, b.data());
        CHECK(same_bits(a, b));
        scalar::kTable.column_min(data.data(), rows, stride, cols, a.data());
        k.column_min(data.data(), rows, stride, cols, b.data());
        CHECK(same_bits(a, b));
        scalar::kTable.column_max(data.data(), rows, stride, cols, a.data());
        k.column_max(data.data(), rows, stride, cols, b.data());
        CHECK(same_bits(a, b));

        const std::size_t n = 1 + rng() % 37;
        const double tp = 1 + static_cast<double>(rng() % 100), tn = 1 + static_cast<double>(rng() % 100);
        std::vector<double> lp(n), ln(n);
        for (std::size_t i = 0; i < n; ++i) {
          // Both sides keep positive weight.
          do {
            lp[i] = static_cast<double>(rng() % static_cast<std::uint64_t>(tp + 1));
            ln[i] = static_cast<double>(rng() % static_cast<std::uint64_t>(tn + 1));
          } while (lp[i] + ln[i] == 0 || lp[i] + ln[i] == tp + tn);
        }
        std::vector<double> ga(n), gb(n);
        scalar::kTable.gini_split_scores(lp.data(), ln.data(), n, tp, tn, ga.data());
        k.gini_split_scores(lp.data(), ln.data(), n, tp, tn, gb.data());
        CHECK(same_bits(ga, gb));
      }
    }
  }
}

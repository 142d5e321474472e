#include <gtest/gtest.h>

#include "oracles.hpp"
#include "streambank/cost_model.hpp"
#include "streambank/error.hpp"

using namespace streambank;

namespace {

CostQuery query(Index n, Index b, const char* r) { return CostQuery{n, b, SamplingRate::parse(r)}; }

}  // namespace

TEST(CostModel, Batchless) {
  EXPECT_EQ(predict_batchless(query(16, 4, "0.25")), 64u);
  EXPECT_EQ(predict_batchless(query(10000, 100, "0.01")), 1000000u);
  EXPECT_EQ(predict_batchless(query(37, 1, "1")), 37u * 37u);
}

TEST(CostModel, IncrementalWorkedValues) {
  EXPECT_EQ(predict_incremental_sum(query(16, 4, "0.25")), 60u);
  EXPECT_EQ(oracle::incremental_sum_direct(16, 4, 1), 60u);
  const auto small = predict_incremental_closed(query(16, 4, "0.25"));
  EXPECT_EQ(small.half_term, 40u);
  EXPECT_EQ(small.extra_term, 20u);

  EXPECT_EQ(predict_incremental_sum(query(10000, 100, "0.01")), 838300u);
  EXPECT_EQ(oracle::incremental_sum_direct(10000, 100, 1), 838300u);
  const auto large = predict_incremental_closed(query(10000, 100, "0.01"));
  EXPECT_EQ(large.half_term, 505000u);
  EXPECT_EQ(large.extra_term, 333300u);
}

TEST(CostModel, SingleBatchDegeneratesToBatchless) {
  for (Index n : {4, 10, 100}) {
    EXPECT_EQ(predict_incremental_sum(query(n, n, "0.5")), predict_batchless(query(n, n, "0.5")));
  }
}

TEST(CostModel, ClosedFormIdentitySweep) {
  std::size_t checked = 0;
  for (Index n = 8; n <= 4096; n = n < 64 ? n + 8 : n * 2) {
    for (Index b = 1; b <= n; ++b) {
      if (n % b != 0) continue;
      for (std::int64_t den : {1, 2, 4, 8, 10, 16, 100}) {
        for (std::int64_t num = 1; num <= den; num += std::max<std::int64_t>(1, den / 4)) {
          const SamplingRate r = SamplingRate::fraction(num, den);
          if (!r.integral_times(b)) continue;
          const CostQuery q{n, b, r};
          const auto closed = predict_incremental_closed(q);
          const auto sum = predict_incremental_sum(q);
          ASSERT_EQ(closed.total(), sum) << n << " " << b << " " << num << "/" << den;
          ASSERT_EQ(sum, oracle::incremental_sum_direct(
                             static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(b),
                             static_cast<std::uint64_t>(r.floor_times(b))));
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 1000u);
}

TEST(CostModel, RatioFormulaForBEqualsRN) {
  struct Case { Index n; const char* r; double rv; };
  for (const Case c : {Case{10000, "0.01", 0.01}, Case{400, "0.05", 0.05}, Case{1000, "0.1", 0.1},
                       Case{40000, "0.005", 0.005}}) {
    const Index b = SamplingRate::parse(c.r).floor_times(c.n);
    const double sum = static_cast<double>(predict_incremental_sum(query(c.n, b, c.r)));
    const double ratio = sum / (c.rv * static_cast<double>(c.n) * static_cast<double>(c.n));
    const double r = c.rv;
    const double formula = 0.5 * (1 + r) + (1 + r) * (2 + r) / 6.0 - 0.5 * r * (1 + r);
    EXPECT_NEAR(ratio, formula, 1e-12) << c.n;
  }
  const double at_001 = 838300.0 / 1000000.0;
  EXPECT_NEAR(at_001, 0.8383, 1e-12);
  EXPECT_LE(std::abs(at_001 - 5.0 / 6.0) / (5.0 / 6.0), 0.01);
}

TEST(CostModel, ApproachesFiveSixths) {
  // N = s^2, r = 1/s, B = rN = s, so rB = 1 stays integral as r shrinks.
  double prev_gap = 1.0;
  for (Index s : {10, 30, 100, 300}) {
    const Index n = s * s;
    const double sum =
        static_cast<double>(predict_incremental_sum(CostQuery{n, s, SamplingRate::fraction(1, s)}));
    const double ratio = sum / static_cast<double>(s * s * s);
    const double gap = std::abs(ratio - 5.0 / 6.0);
    EXPECT_LT(gap, prev_gap);
    prev_gap = gap;
  }
  EXPECT_LT(prev_gap, 1e-2);
}

TEST(CostModel, PreconditionsEnforced) {
  EXPECT_FALSE(incremental_prediction_defined(query(10, 3, "0.5")));
  EXPECT_FALSE(incremental_prediction_defined(query(12, 3, "0.5")));
  EXPECT_TRUE(incremental_prediction_defined(query(12, 4, "0.5")));
  for (const CostQuery& q : {query(10, 3, "0.5"), query(12, 3, "0.5")}) {
    try {
      predict_incremental_sum(q);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::config);
    }
    EXPECT_THROW(predict_incremental_closed(q), Error);
  }
  EXPECT_THROW(predict_batchless(query(3, 4, "0.5")), Error);
  EXPECT_THROW(predict_batchless(query(4, 0, "0.5")), Error);
}

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "streambank/error.hpp"
#include "streambank/metrics.hpp"

using namespace streambank;

namespace {

double auc(std::vector<double> s, std::vector<int> l) { return auroc(LabeledScores{std::move(s), std::move(l)}).auroc; }

LabeledScores random_input(std::size_t n, std::uint64_t seed, int levels) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> value(0, levels - 1);
  std::bernoulli_distribution label(0.4);
  LabeledScores d;
  for (std::size_t i = 0; i < n; ++i) {
    d.scores.push_back(static_cast<double>(value(rng)) * 0.37);
    d.labels.push_back(label(rng) ? 1 : 0);
  }
  d.labels[0] = 0;
  d.labels[1] = 1;
  return d;
}

}  // namespace

TEST(Auroc, Examples) {
  EXPECT_EQ(auc({1, 2, 3, 4}, {0, 0, 1, 1}), 1.0);
  EXPECT_EQ(auc({5, 5, 5, 5, 5}, {0, 1, 0, 1, 1}), 0.5);
  EXPECT_EQ(auc({1, 3, 2, 4}, {0, 0, 1, 1}), 0.75);
  EXPECT_EQ(auc({4, 3, 2, 1}, {0, 0, 1, 1}), 0.0);
}

TEST(Auroc, CountsClasses) {
  const auto r = auroc(LabeledScores{{0.1, 0.2, 0.3}, {1, 0, 0}});
  EXPECT_EQ(r.n_pos, 1);
  EXPECT_EQ(r.n_neg, 2);
}

TEST(Auroc, MatchesPairwiseOracle) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    for (int levels : {2, 7, 50, 100000}) {
      const auto d = random_input(1000, seed * 17 + static_cast<std::uint64_t>(levels), levels);
      EXPECT_NEAR(auroc(d).auroc, oracle::pairwise_auroc(d.scores, d.labels), 1e-12);
    }
  }
}

TEST(Auroc, InvariantUnderMonotoneTransform) {
  const auto d = random_input(500, 3, 40);
  LabeledScores t = d;
  for (double& s : t.scores) s = std::exp(2.0 * s) - 7.0;
  EXPECT_EQ(auroc(d).auroc, auroc(t).auroc);
}

TEST(Auroc, NegationComplements) {
  const auto d = random_input(400, 8, 30);
  LabeledScores neg = d;
  for (double& s : neg.scores) s = -s;
  EXPECT_NEAR(auroc(d).auroc, 1.0 - auroc(neg).auroc, 1e-12);
}

TEST(Auroc, Errors) {
  EXPECT_THROW(auc({1, 2}, {0, 0}), Error);
  EXPECT_THROW(auc({1, 2}, {1, 1}), Error);
  EXPECT_THROW(auc({1, 2, 3}, {0, 1}), Error);
  EXPECT_THROW(auc({1, 2}, {0, 2}), Error);
  EXPECT_THROW(auc({1, std::nan("")}, {0, 1}), Error);
  try {
    auc({}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::data);
  }
}

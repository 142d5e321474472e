#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace streambank {

/// Scores with binary labels: 0 = normal, 1 = anomalous.
struct LabeledScores {
  std::vector<double> scores;
  std::vector<int> labels;
};

struct AurocResult {
  double auroc = 0.5;
  std::int64_t n_pos = 0;
  std::int64_t n_neg = 0;
};

/// Area under the ROC curve via the Mann-Whitney rank statistic with midranks,
/// i.e. P(pos > neg) + P(pos == neg) / 2. Throws ErrorKind::data when the
/// lengths differ, a label is not 0/1, or either class is missing.
AurocResult auroc(const LabeledScores& data);
AurocResult auroc(std::span<const double> scores, std::span<const int> labels);

}  // namespace streambank

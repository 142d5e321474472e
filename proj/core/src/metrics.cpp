#include "streambank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "streambank/error.hpp"

namespace streambank {

AurocResult auroc(const LabeledScores& data) { return auroc(data.scores, data.labels); }

AurocResult auroc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorKind::data, "auroc: " + std::to_string(scores.size()) + " scores but " +
                                     std::to_string(labels.size()) + " labels");
  }
  AurocResult out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) ++out.n_pos;
    else if (labels[i] == 0) ++out.n_neg;
    else throw Error(ErrorKind::data, "auroc: label at " + std::to_string(i) + " is not 0 or 1");
    if (std::isnan(scores[i])) throw Error(ErrorKind::data, "auroc: NaN score at " + std::to_string(i));
  }
  if (out.n_pos == 0 || out.n_neg == 0) {
    throw Error(ErrorKind::data, "auroc: undefined with a single class (" +
                                     std::to_string(out.n_pos) + " anomalous, " +
                                     std::to_string(out.n_neg) + " normal)");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Ranks are 1-based; a tie group spanning positions [i, j) gets (i + j + 1) / 2.
  // Doubled ranks keep the sum integral.
  std::int64_t pos_rank_sum_x2 = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const auto midrank_x2 = static_cast<std::int64_t>(i + j + 1);
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]] == 1) pos_rank_sum_x2 += midrank_x2;
    }
    i = j;
  }

  // U = R_pos - n_pos (n_pos + 1) / 2, so 2U = 2 R_pos - n_pos (n_pos + 1).
  const std::int64_t u_x2 = pos_rank_sum_x2 - out.n_pos * (out.n_pos + 1);
  out.auroc = static_cast<double>(u_x2) / (2.0 * static_cast<double>(out.n_pos) *
                                           static_cast<double>(out.n_neg));
  return out;
}

}  // namespace streambank

#pragma once

// Closed-form comparison counts for batchless and incremental greedy
// sampling. All arithmetic is exact; preconditions that the algebra relies on
// (B divides N, r * B integral) are enforced rather than rounded away.

#include <cstdint>

#include "streambank/coreset.hpp"

namespace streambank {

struct CostQuery {
  Index n_total = 1;  ///< N
  Index batch = 1;    ///< B
  SamplingRate rate = SamplingRate::fraction(1, 1);
};

struct ClosedFormCost {
  std::uint64_t half_term = 0;   ///< (1/2) r N (N + B)
  std::uint64_t extra_term = 0;  ///< r^2 N (N+B)(2N+B) / (6B) - r^2 N (N+B) / 2

  std::uint64_t total() const noexcept { return half_term + extra_term; }
};

/// N * floor(r N): one pass over N vectors per selected sample.
std::uint64_t predict_batchless(const CostQuery& q);

/// sum_{b=1}^{N/B} [B + r(b-1)B] * [r b B], evaluated term by term.
/// Throws ErrorKind::config unless B divides N and r * B is an integer.
std::uint64_t predict_incremental_sum(const CostQuery& q);

/// The same count through the two closed-form terms, in rational arithmetic.
ClosedFormCost predict_incremental_closed(const CostQuery& q);

/// True when the exact incremental predictions are defined for `q`.
bool incremental_prediction_defined(const CostQuery& q) noexcept;

}  // namespace streambank

#pragma once

// Streaming coreset maintenance.
//
// After each batch (or once enough vectors are buffered) the previously kept
// samples and the buffered vectors are pooled and greedily resampled down to
// floor(r * visited). Stored samples are lazily rotated into the newest basis
// right before they take part in a resample.

#include <string>
#include <string_view>
#include <vector>

#include "streambank/coreset.hpp"

namespace streambank {

class BufferPolicy {
 public:
  enum class Kind {
    every_batch,  ///< resample after every batch ("no" buffering)
    factor,       ///< resample once c * floor(r * visited) vectors are buffered
    unbounded,    ///< buffer everything; only flush resamples ("all")
  };

  static BufferPolicy every_batch() { return BufferPolicy(Kind::every_batch, 0); }
  static BufferPolicy factor(Index c);
  static BufferPolicy unbounded() { return BufferPolicy(Kind::unbounded, 0); }
  /// "no", "all", or a positive integer factor.
  static BufferPolicy parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  Index multiple() const noexcept { return factor_; }
  /// "no", "all", or the factor as a decimal string; inverse of parse.
  std::string name() const;

  friend bool operator==(const BufferPolicy&, const BufferPolicy&) = default;

 private:
  BufferPolicy(Kind kind, Index factor) : kind_(kind), factor_(factor) {}
  Kind kind_;
  Index factor_;
};

struct IncrementalSamplerConfig {
  SamplingRate rate = SamplingRate::fraction(1, 1);
  Index batch_size = 1;  ///< B, the largest batch observe_batch accepts
  BufferPolicy policy = BufferPolicy::every_batch();

  void validate() const;
};

struct IncrementalResult {
  Matrix coords;               ///< d x M, one sampled vector per column
  std::vector<Index> indices;  ///< stream position of each sample
  ComparisonCounter counter;
  Index peak_stored = 0;
  Index visited = 0;
};

class IncrementalSampler {
 public:
  explicit IncrementalSampler(IncrementalSamplerConfig config);

  /// `transition` maps coordinates of the previous basis into the basis of
  /// `batch` (U_new^T * U_old); it is ignored for the very first batch.
  void observe_batch(const Eigen::Ref<const Matrix>& batch, const Eigen::Ref<const Matrix>& transition);
  /// Observe a batch expressed in the same basis as everything before it.
  void observe_batch(const Eigen::Ref<const Matrix>& batch);

  /// Force a resample of samples plus buffer, regardless of the policy.
  void resample();

  /// Drain the buffer with a final resample if needed and return the samples.
  IncrementalResult flush();

  const IncrementalSamplerConfig& config() const noexcept { return config_; }
  const Matrix& samples() const noexcept { return samples_; }
  const std::vector<Index>& sample_indices() const noexcept { return sample_ids_; }
  Index buffered() const noexcept { return buffer_.cols(); }
  Index visited() const noexcept { return visited_; }
  Index peak_stored() const noexcept { return peak_stored_; }
  Index resample_count() const noexcept { return resamples_; }
  const ComparisonCounter& counter() const noexcept { return counter_; }

 private:
  bool should_trigger() const;
  void note_stored();

  IncrementalSamplerConfig config_;
  Index dim_ = -1;  ///< dimension of the newest basis; -1 before the first batch
  Matrix samples_;  ///< in the basis reached by applying pending_
  std::vector<Index> sample_ids_;
  Matrix pending_;  ///< dim_ x samples_.rows()
  Matrix buffer_;   ///< dim_ x buffered, newest basis
  std::vector<Index> buffer_ids_;
  Index visited_ = 0;
  Index peak_stored_ = 0;
  Index resamples_ = 0;
  ComparisonCounter counter_;
};

}  // namespace streambank

#pragma once

// Deterministic greedy k-center (farthest point) sampling with exact counts of
// pairwise distance evaluations.

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "streambank/dense.hpp"

namespace streambank {

/// A sampling rate in (0, 1] held as an exact fraction, so that floor(r * n)
/// never suffers from binary rounding (0.29 * 100 is 28.999... in doubles).
class SamplingRate {
 public:
  /// Uses the shortest decimal that round-trips `r`, e.g. 0.1 -> 1/10.
  static SamplingRate from_double(double r);
  /// Decimal literal such as "0.25" or "1".
  static SamplingRate parse(std::string_view text);
  static SamplingRate fraction(std::int64_t num, std::int64_t den);

  std::int64_t numerator() const noexcept { return num_; }
  std::int64_t denominator() const noexcept { return den_; }
  double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// floor(r * n), exact.
  Index floor_times(Index n) const noexcept;
  /// True when r * n is an integer.
  bool integral_times(Index n) const noexcept;

  friend bool operator==(const SamplingRate&, const SamplingRate&) = default;

 private:
  SamplingRate(std::int64_t num, std::int64_t den);
  std::int64_t num_ = 1;
  std::int64_t den_ = 1;
};

struct ComparisonCounter {
  std::uint64_t anchor_comparisons = 0;  ///< distances to the mean anchor
  std::uint64_t greedy_comparisons = 0;  ///< distances evaluated while selecting

  ComparisonCounter& operator+=(const ComparisonCounter& other) noexcept {
    anchor_comparisons += other.anchor_comparisons;
    greedy_comparisons += other.greedy_comparisons;
    return *this;
  }
  friend bool operator==(const ComparisonCounter&, const ComparisonCounter&) = default;
};

/// Bank-size target: an absolute count, or a rate resolved as max(1, floor(r N)).
class CoresetConfig {
 public:
  static CoresetConfig count(Index m) { return CoresetConfig(m); }
  static CoresetConfig rate(SamplingRate r) { return CoresetConfig(r); }

  /// Resolved target for N input vectors; throws ErrorKind::config when it
  /// would be outside [1, N].
  Index resolve(Index n) const;

 private:
  explicit CoresetConfig(std::variant<Index, SamplingRate> target) : target_(target) {}
  std::variant<Index, SamplingRate> target_;
};

struct CoresetResult {
  std::vector<Index> indices;  ///< selection order, unique, each in [0, N)
  ComparisonCounter counter;
};

/// Euclidean distance; throws ErrorKind::shape on length mismatch.
double distance(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

/// Greedy k-center sampling of the columns of a k x N matrix.
///
/// The column mean acts as a virtual first center (never selected). Each of
/// the M iterations picks the column farthest from the current centers (lowest
/// index on ties) and then rescans all N columns, so the greedy counter ends at
/// exactly N * M and the anchor counter at N.
CoresetResult greedy_sample(const Eigen::Ref<const Matrix>& vectors, const CoresetConfig& config);

/// Same algorithm with an explicit target in [0, N]. A zero target selects
/// nothing and evaluates no distances.
CoresetResult greedy_select(const Eigen::Ref<const Matrix>& vectors, Index target);

/// max_i min_{j in selected} |x_i - x_j|, the k-center coverage radius.
double coverage_radius(const Eigen::Ref<const Matrix>& vectors, const std::vector<Index>& selected);

}  // namespace streambank

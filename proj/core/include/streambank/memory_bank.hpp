#pragma once

// The trained artifact: the final basis plus the sampled coordinates, scored
// by exact nearest-neighbor distance in the reduced space.
//
// On disk a bank is a directory:
//   basis.npy  (k_effective, m)  one basis vector per row
//   svals.npy  (k_effective,)
//   bank.npy   (M, k_effective)  one bank entry per row
//   meta.json  format_version, k, k_effective, m, precision, n_b, rate,
//              buffer_policy, vectors_seen

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "streambank/reducer.hpp"

namespace streambank {

inline constexpr int kBankFormatVersion = 1;

struct BankMeta {
  Index k_requested = 0;
  Index m = 0;
  Precision precision = Precision::f64;
  Index n_b = 0;
  double rate = 1.0;
  std::string buffer_policy = "all";
  Index vectors_seen = 0;

  friend bool operator==(const BankMeta&, const BankMeta&) = default;
};

class MemoryBank {
 public:
  /// Throws when coords are empty or non-finite, or shapes disagree.
  MemoryBank(FinalBasis basis, Matrix coords, BankMeta meta);

  const FinalBasis& basis() const noexcept { return basis_; }
  const Matrix& coords() const noexcept { return coords_; }
  const BankMeta& meta() const noexcept { return meta_; }
  Index size() const noexcept { return coords_.cols(); }
  Index k_effective() const noexcept { return basis_.k_effective(); }

 private:
  FinalBasis basis_;
  Matrix coords_;
  BankMeta meta_;
};

struct ScoreReport {
  std::vector<double> per_vector_scores;
  std::vector<Index> nearest_index;  ///< bank column attaining each score
  double image_score = 0.0;          ///< max of per_vector_scores; 0 when empty
};

/// Project each query column and report its distance to the nearest bank entry.
ScoreReport score(const MemoryBank& bank, const Eigen::Ref<const Matrix>& queries);

/// Nearest-entry scoring of already-projected queries against raw coordinates.
/// Ties resolve to the smallest bank column.
ScoreReport score_projected(const Eigen::Ref<const Matrix>& bank_coords,
                            const Eigen::Ref<const Matrix>& projected);

/// Image-level score: the maximum patch score. Throws on an empty list.
double aggregate_image(std::span<const double> patch_scores);

/// Write the bank directory, creating it if needed.
void save_bank(const MemoryBank& bank, const std::filesystem::path& dir);
/// Read and validate a bank directory; never returns a partial bank.
MemoryBank load_bank(const std::filesystem::path& dir);

}  // namespace streambank

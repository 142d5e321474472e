#pragma once

// Streaming truncated SVD over batches of column vectors.
//
// Each batch X_b is decomposed on arrival and only its factors are archived.
// The running basis is refreshed from the SVD of [U * diag(S) | X_b], whose
// Gram matrix approximates the Gram matrix of every batch seen so far. After
// the stream ends, `finalize` produces the final basis plus one small
// rotation per batch that carries the batch's right singular vectors into the
// final coordinate system without inverting any singular values.

#include <vector>

#include "streambank/dense.hpp"

namespace streambank {

struct ReducerConfig {
  Index k = 1;               ///< target reduced dimension
  Index batch_capacity = 1;  ///< max vectors per batch (n_b)
  Precision precision = Precision::f64;

  void validate() const;
};

/// Archived factors of one batch; the raw batch itself is never kept.
struct BatchDecomposition {
  Matrix u;  ///< m x k'_b
  Vector s;  ///< k'_b
  Matrix v;  ///< n_b x k'_b
  Index batch_index = 0;  ///< 1-based
  Index batch_size = 0;

  Index rank() const noexcept { return s.size(); }
  Index stored_values() const noexcept { return u.size() + s.size() + v.size(); }
};

struct FinalBasis {
  Matrix u;  ///< m x k_effective
  Vector s;  ///< k_effective

  Index m() const noexcept { return u.rows(); }
  Index k_effective() const noexcept { return u.cols(); }
};

/// R_b = U_final^T * U_b * diag(S_b), shape k_effective x k'_b.
struct RotationMatrix {
  Matrix r;
  Index batch_index = 0;
};

struct Finalization {
  FinalBasis basis;
  std::vector<RotationMatrix> rotations;  ///< one per archived batch, in order
};

class IncrementalReducer {
 public:
  explicit IncrementalReducer(ReducerConfig config);

  /// Decompose and archive one m x n_b batch, then refresh the running basis.
  /// The batch is not referenced after this returns.
  void ingest_batch(const Eigen::Ref<const Matrix>& batch);

  Finalization finalize() const;

  const ReducerConfig& config() const noexcept { return config_; }
  const Matrix& current_basis() const noexcept { return u_cur_; }
  const Vector& current_singular_values() const noexcept { return s_cur_; }
  const std::vector<BatchDecomposition>& archive() const noexcept { return archive_; }
  Index total_vectors() const noexcept { return total_vectors_; }
  Index batch_count() const noexcept { return static_cast<Index>(archive_.size()); }
  /// Feature dimension m; 0 before the first batch.
  Index dimension() const noexcept { return m_; }

  /// Number of doubles held: every archived (U_b, S_b, V_b) plus the running pair.
  Index stored_values() const noexcept;

 private:
  ReducerConfig config_;
  Index m_ = 0;
  Matrix u_cur_;
  Vector s_cur_;
  std::vector<BatchDecomposition> archive_;
  Index total_vectors_ = 0;
};

/// Coordinates of a batch in the final basis: R_b * V_b^T (k_effective x n_b).
Matrix reduce_batch(const RotationMatrix& rotation, const BatchDecomposition& batch);

/// U_final^T * y for an m x q block of query vectors.
Matrix project_query(const FinalBasis& basis, const Eigen::Ref<const Matrix>& queries);

}  // namespace streambank

#pragma once

// Dense linear-algebra kernel shared by every other module.
//
// Matrices are Eigen column-major doubles. Columns hold vectors: a feature
// matrix of n vectors in m dimensions is m x n. Values are always computed in
// double precision; `Precision::f32` only controls the rounding applied to
// results and the dtype used when persisting them.

#include <string_view>

#include <Eigen/Dense>

#include "streambank/error.hpp"

namespace streambank {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Precision { f32, f64 };

std::string_view to_string(Precision p) noexcept;  // "single" | "double"
Precision parse_precision(std::string_view name);

/// Unit roundoff u = eps / 2 of the storage precision.
double unit_roundoff(Precision p) noexcept;

/// Orthonormality and reconstruction tolerance: 1e-5 single, 1e-10 double.
double tolerance(Precision p) noexcept;

/// Round every entry to the nearest representable value of `p` in place.
template <typename Derived>
void round_to(Eigen::MatrixBase<Derived>& x, Precision p) {
  if (p == Precision::f32) {
    x = x.template cast<float>().template cast<double>();
  }
}

/// Throws ErrorKind::data naming `what` when any entry is NaN or infinite.
void require_finite(const Eigen::Ref<const Matrix>& x, std::string_view what);

/// Leading singular triplets of a matrix, x ~= u * diag(s) * v^T.
///
/// `rank()` may be smaller than `k_requested` when the input is rank
/// deficient, and is 0 for an all-zero input.
struct TruncatedSVD {
  Matrix u;  ///< m x rank, orthonormal columns
  Vector s;  ///< non-increasing, positive
  Matrix v;  ///< n x rank, orthonormal columns; 0 x rank when only left factors were requested
  Index k_requested = 0;

  Index rank() const noexcept { return s.size(); }
};

enum class SvdFactors { both, left_only };

/// Truncated SVD with deterministic signs.
///
/// Keeps at most min(k, m, n) triplets and drops singular values below
/// max(m, n) * s[0] * unit_roundoff(precision). Each (u, v) column pair is
/// flipped so the largest-magnitude entry of the u column (lowest row on ties)
/// is positive. Results are rounded to `precision`.
TruncatedSVD truncated_svd(const Eigen::Ref<const Matrix>& x, Index k,
                           Precision precision = Precision::f64,
                           SvdFactors factors = SvdFactors::both);

double frobenius_norm(const Eigen::Ref<const Matrix>& x) noexcept;

/// a * b
Matrix matmul(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b);
/// a^T * b
Matrix matmul_tn(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b);
/// a * b^T
Matrix matmul_nt(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b);

/// max |q^T q - I|, the orthonormality defect of q's columns.
double orthonormality_error(const Eigen::Ref<const Matrix>& q);

}  // namespace streambank

#include "streambank/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace streambank {

std::string_view to_string(Precision p) noexcept {
  return p == Precision::f32 ? "single" : "double";
}

Precision parse_precision(std::string_view name) {
  if (name == "single" || name == "f32" || name == "float32") return Precision::f32;
  if (name == "double" || name == "f64" || name == "float64") return Precision::f64;
  throw Error(ErrorKind::config, "unknown precision '" + std::string(name) +
                                     "' (expected single or double)");
}

double unit_roundoff(Precision p) noexcept {
  return p == Precision::f32 ? std::numeric_limits<float>::epsilon() / 2.0
                             : std::numeric_limits<double>::epsilon() / 2.0;
}

double tolerance(Precision p) noexcept { return p == Precision::f32 ? 1e-5 : 1e-10; }

void require_finite(const Eigen::Ref<const Matrix>& x, std::string_view what) {
  for (Index j = 0; j < x.cols(); ++j) {
    for (Index i = 0; i < x.rows(); ++i) {
      if (!std::isfinite(x(i, j))) {
        std::ostringstream msg;
        msg << what << ": non-finite value at row " << i << ", column " << j;
        throw Error(ErrorKind::data, msg.str());
      }
    }
  }
}

namespace {

// Flip (u_j, v_j) so the largest |u_ij| is positive; ties keep the lowest i.
void apply_sign_convention(Matrix& u, Matrix& v) {
  for (Index j = 0; j < u.cols(); ++j) {
    Index pivot = 0;
    double best = -1.0;
    for (Index i = 0; i < u.rows(); ++i) {
      const double a = std::abs(u(i, j));
      if (a > best) {
        best = a;
        pivot = i;
      }
    }
    if (u(pivot, j) < 0.0) {
      u.col(j) = -u.col(j);
      if (v.cols() > j) v.col(j) = -v.col(j);
    }
  }
}

}  // namespace

TruncatedSVD truncated_svd(const Eigen::Ref<const Matrix>& x, Index k, Precision precision,
                           SvdFactors factors) {
  if (k < 1) {
    throw Error(ErrorKind::config, "truncated_svd: k must be >= 1, got " + std::to_string(k));
  }
  if (x.rows() == 0 || x.cols() == 0) {
    throw Error(ErrorKind::data, "truncated_svd: empty input matrix");
  }
  require_finite(x, "truncated_svd input");

  const bool want_v = factors == SvdFactors::both;
  const unsigned options = want_v ? Eigen::ComputeThinU | Eigen::ComputeThinV : Eigen::ComputeThinU;
  Eigen::BDCSVD<Matrix> svd(x, options);
  if (svd.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "truncated_svd: SVD did not converge on a " << x.rows() << "x" << x.cols()
        << " matrix";
    throw Error(ErrorKind::numerical, msg.str());
  }

  const Vector& sv = svd.singularValues();
  const Index cap = std::min<Index>({k, x.rows(), x.cols()});
  const double cutoff = static_cast<double>(std::max(x.rows(), x.cols())) *
                        (sv.size() > 0 ? sv(0) : 0.0) * unit_roundoff(precision);
  Index rank = 0;
  while (rank < cap && sv(rank) > cutoff) ++rank;

  TruncatedSVD out;
  out.k_requested = k;
  out.s = sv.head(rank);
  out.u = svd.matrixU().leftCols(rank);
  out.v = want_v ? Matrix(svd.matrixV().leftCols(rank)) : Matrix(0, rank);
  apply_sign_convention(out.u, out.v);

  round_to(out.u, precision);
  round_to(out.s, precision);
  round_to(out.v, precision);
  return out;
}

double frobenius_norm(const Eigen::Ref<const Matrix>& x) noexcept { return x.norm(); }

namespace {

void require_inner(Index a_inner, Index b_inner, const char* op) {
  if (a_inner != b_inner) {
    std::ostringstream msg;
    msg << op << ": inner dimensions disagree (" << a_inner << " vs " << b_inner << ")";
    throw Error(ErrorKind::shape, msg.str());
  }
}

}  // namespace

Matrix matmul(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b) {
  require_inner(a.cols(), b.rows(), "matmul");
  return a * b;
}

Matrix matmul_tn(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b) {
  require_inner(a.rows(), b.rows(), "matmul_tn");
  return a.transpose() * b;
}

Matrix matmul_nt(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b) {
  require_inner(a.cols(), b.cols(), "matmul_nt");
  return a * b.transpose();
}

double orthonormality_error(const Eigen::Ref<const Matrix>& q) {
  if (q.cols() == 0) return 0.0;
  const Matrix gram = q.transpose() * q;
  return (gram - Matrix::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
}

}  // namespace streambank

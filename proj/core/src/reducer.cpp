#include "streambank/reducer.hpp"

#include <sstream>
#include <string>

namespace streambank {

void ReducerConfig::validate() const {
  if (k < 1) throw Error(ErrorKind::config, "reducer: k must be >= 1");
  if (batch_capacity < 1) throw Error(ErrorKind::config, "reducer: batch capacity must be >= 1");
}

IncrementalReducer::IncrementalReducer(ReducerConfig config) : config_(config) {
  config_.validate();
}

void IncrementalReducer::ingest_batch(const Eigen::Ref<const Matrix>& batch) {
  if (batch.cols() == 0) throw Error(ErrorKind::data, "ingest_batch: empty batch");
  if (batch.cols() > config_.batch_capacity) {
    std::ostringstream msg;
    msg << "ingest_batch: batch of " << batch.cols() << " vectors exceeds capacity "
        << config_.batch_capacity;
    throw Error(ErrorKind::shape, msg.str());
  }
  if (m_ != 0 && batch.rows() != m_) {
    std::ostringstream msg;
    msg << "ingest_batch: batch has " << batch.rows() << " rows, expected " << m_;
    throw Error(ErrorKind::shape, msg.str());
  }

  TruncatedSVD d = truncated_svd(batch, config_.k, config_.precision);

  if (d.rank() > 0) {
    if (u_cur_.cols() == 0) {
      u_cur_ = d.u;
      s_cur_ = d.s;
    } else {
      // [U * diag(S) | X_b]; the previous pair is released once replaced.
      Matrix stacked(batch.rows(), u_cur_.cols() + batch.cols());
      stacked.leftCols(u_cur_.cols()) = u_cur_ * s_cur_.asDiagonal();
      stacked.rightCols(batch.cols()) = batch;
      TruncatedSVD update =
          truncated_svd(stacked, config_.k, config_.precision, SvdFactors::left_only);
      u_cur_ = std::move(update.u);
      s_cur_ = std::move(update.s);
    }
  } else if (u_cur_.cols() == 0) {
    // All-zero batches so far: keep an m x 0 basis so dimensions stay known.
    u_cur_.resize(batch.rows(), 0);
    s_cur_.resize(0);
  }

  m_ = batch.rows();
  total_vectors_ += batch.cols();
  archive_.push_back(BatchDecomposition{std::move(d.u), std::move(d.s), std::move(d.v),
                                        batch_count() + 1, batch.cols()});
}

Finalization IncrementalReducer::finalize() const {
  if (archive_.empty()) throw Error(ErrorKind::state, "finalize: no batches ingested");

  Finalization out;
  out.basis = FinalBasis{u_cur_, s_cur_};
  out.rotations.reserve(archive_.size());
  for (const auto& d : archive_) {
    Matrix r = (u_cur_.transpose() * d.u) * d.s.asDiagonal();
    out.rotations.push_back(RotationMatrix{std::move(r), d.batch_index});
  }
  return out;
}

Index IncrementalReducer::stored_values() const noexcept {
  Index total = u_cur_.size() + s_cur_.size();
  for (const auto& d : archive_) total += d.stored_values();
  return total;
}

Matrix reduce_batch(const RotationMatrix& rotation, const BatchDecomposition& batch) {
  if (rotation.batch_index != batch.batch_index) {
    std::ostringstream msg;
    msg << "reduce_batch: rotation for batch " << rotation.batch_index
        << " applied to batch " << batch.batch_index;
    throw Error(ErrorKind::state, msg.str());
  }
  if (rotation.r.cols() != batch.v.cols()) {
    throw Error(ErrorKind::shape, "reduce_batch: rotation and batch ranks disagree");
  }
  return rotation.r * batch.v.transpose();
}

Matrix project_query(const FinalBasis& basis, const Eigen::Ref<const Matrix>& queries) {
  if (queries.rows() != basis.m()) {
    std::ostringstream msg;
    msg << "project_query: queries have " << queries.rows() << " rows, basis expects "
        << basis.m();
    throw Error(ErrorKind::shape, msg.str());
  }
  return basis.u.transpose() * queries;
}

}  // namespace streambank

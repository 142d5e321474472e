#include "streambank/incremental_sampler.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace streambank {

namespace {

bool is_exact_identity(const Eigen::Ref<const Matrix>& t) {
  return t.rows() == t.cols() && t.isIdentity(0.0);
}

}  // namespace

BufferPolicy BufferPolicy::factor(Index c) {
  if (c < 1) throw Error(ErrorKind::config, "buffer factor must be >= 1");
  return BufferPolicy(Kind::factor, c);
}

BufferPolicy BufferPolicy::parse(std::string_view text) {
  if (text == "no") return every_batch();
  if (text == "all") return unbounded();
  long long c = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), c);
  if (ec != std::errc{} || ptr != text.data() + text.size() || c < 1) {
    throw Error(ErrorKind::config, "invalid buffer policy '" + std::string(text) +
                                       "' (expected all, no, or a positive integer)");
  }
  return factor(static_cast<Index>(c));
}

std::string BufferPolicy::name() const {
  switch (kind_) {
    case Kind::every_batch: return "no";
    case Kind::unbounded: return "all";
    case Kind::factor: return std::to_string(factor_);
  }
  return "?";
}

void IncrementalSamplerConfig::validate() const {
  if (batch_size < 1) throw Error(ErrorKind::config, "sampling batch size must be >= 1");
}

IncrementalSampler::IncrementalSampler(IncrementalSamplerConfig config) : config_(config) {
  config_.validate();
}

void IncrementalSampler::observe_batch(const Eigen::Ref<const Matrix>& batch) {
  if (dim_ >= 0 && batch.rows() != dim_) {
    std::ostringstream msg;
    msg << "observe_batch: batch has dimension " << batch.rows() << ", expected " << dim_;
    throw Error(ErrorKind::shape, msg.str());
  }
  const Index d = dim_ < 0 ? batch.rows() : dim_;
  observe_batch(batch, Matrix::Identity(d, d));
}

void IncrementalSampler::observe_batch(const Eigen::Ref<const Matrix>& batch,
                                       const Eigen::Ref<const Matrix>& transition) {
  if (batch.cols() > config_.batch_size) {
    std::ostringstream msg;
    msg << "observe_batch: batch of " << batch.cols() << " vectors exceeds B = "
        << config_.batch_size;
    throw Error(ErrorKind::shape, msg.str());
  }

  if (dim_ < 0) {
    dim_ = batch.rows();
    pending_ = Matrix::Identity(dim_, dim_);
    samples_.resize(dim_, 0);
    buffer_.resize(dim_, 0);
  } else {
    if (transition.cols() != dim_ || transition.rows() != batch.rows()) {
      std::ostringstream msg;
      msg << "observe_batch: transition is " << transition.rows() << "x" << transition.cols()
          << ", expected " << batch.rows() << "x" << dim_;
      throw Error(ErrorKind::shape, msg.str());
    }
    if (!is_exact_identity(transition)) {
      pending_ = transition * pending_;
      buffer_ = transition * buffer_;
      dim_ = batch.rows();
    }
  }

  const Index old = buffer_.cols();
  buffer_.conservativeResize(dim_, old + batch.cols());
  buffer_.rightCols(batch.cols()) = batch;
  for (Index i = 0; i < batch.cols(); ++i) buffer_ids_.push_back(visited_ + i);
  visited_ += batch.cols();
  note_stored();

  if (should_trigger()) resample();
}

bool IncrementalSampler::should_trigger() const {
  switch (config_.policy.kind()) {
    case BufferPolicy::Kind::every_batch: return true;
    case BufferPolicy::Kind::unbounded: return false;
    case BufferPolicy::Kind::factor:
      return buffer_.cols() >=
             config_.policy.multiple() * config_.rate.floor_times(visited_);
  }
  return false;
}

void IncrementalSampler::note_stored() {
  peak_stored_ = std::max(peak_stored_, samples_.cols() + buffer_.cols());
}

void IncrementalSampler::resample() {
  if (dim_ < 0) return;

  if (samples_.cols() > 0 && !is_exact_identity(pending_)) samples_ = pending_ * samples_;
  else if (samples_.rows() != dim_) samples_.resize(dim_, 0);
  pending_ = Matrix::Identity(dim_, dim_);

  Matrix pool(dim_, samples_.cols() + buffer_.cols());
  pool << samples_, buffer_;
  std::vector<Index> pool_ids = sample_ids_;
  pool_ids.insert(pool_ids.end(), buffer_ids_.begin(), buffer_ids_.end());

  buffer_.resize(dim_, 0);
  buffer_ids_.clear();

  const Index target = std::min(config_.rate.floor_times(visited_), pool.cols());
  samples_.resize(dim_, target);
  sample_ids_.clear();
  if (pool.cols() > 0) {
    CoresetResult picked = greedy_select(pool, target);
    counter_ += picked.counter;
    for (Index j = 0; j < target; ++j) {
      const Index src = picked.indices[static_cast<std::size_t>(j)];
      samples_.col(j) = pool.col(src);
      sample_ids_.push_back(pool_ids[static_cast<std::size_t>(src)]);
    }
  }
  ++resamples_;
}

IncrementalResult IncrementalSampler::flush() {
  if (buffer_.cols() > 0) resample();

  IncrementalResult out;
  if (samples_.cols() > 0 && !is_exact_identity(pending_)) {
    out.coords = pending_ * samples_;
  } else {
    out.coords = samples_;
  }
  out.indices = sample_ids_;
  out.counter = counter_;
  out.peak_stored = peak_stored_;
  out.visited = visited_;
  return out;
}

}  // namespace streambank

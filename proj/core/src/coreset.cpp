#include "streambank/coreset.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

namespace streambank {

SamplingRate::SamplingRate(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num <= 0 || num > den) {
    std::ostringstream msg;
    msg << "sampling rate must lie in (0, 1], got " << num << "/" << den;
    throw Error(ErrorKind::config, msg.str());
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

SamplingRate SamplingRate::fraction(std::int64_t num, std::int64_t den) {
  return SamplingRate(num, den);
}

SamplingRate SamplingRate::parse(std::string_view text) {
  const auto fail = [&] {
    return Error(ErrorKind::config, "invalid sampling rate '" + std::string(text) + "'");
  };
  if (text.empty()) throw fail();

  std::int64_t num = 0;
  std::int64_t den = 1;
  bool seen_point = false;
  bool seen_digit = false;
  for (char c : text) {
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      seen_digit = true;
      if (num > (std::numeric_limits<std::int64_t>::max() - 9) / 10 ||
          (seen_point && den > std::numeric_limits<std::int64_t>::max() / 10)) {
        throw fail();
      }
      num = num * 10 + (c - '0');
      if (seen_point) den *= 10;
    } else if (c == 'e' || c == 'E') {
      // Scientific notation: fall back to the double path.
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc{} || ptr != text.data() + text.size()) throw fail();
      return from_double(value);
    } else {
      throw fail();
    }
  }
  if (!seen_digit) throw fail();
  return SamplingRate(num, den);
}

SamplingRate SamplingRate::from_double(double r) {
  if (!(r > 0.0 && r <= 1.0)) {
    throw Error(ErrorKind::config, "sampling rate must lie in (0, 1], got " + std::to_string(r));
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, r, std::chars_format::fixed);
  if (ec != std::errc{}) throw Error(ErrorKind::config, "unrepresentable sampling rate");
  return parse(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

__extension__ typedef __int128 i128;

Index SamplingRate::floor_times(Index n) const noexcept {
  const i128 p = static_cast<i128>(n) * num_;
  return static_cast<Index>(p / den_);
}

bool SamplingRate::integral_times(Index n) const noexcept {
  return (static_cast<i128>(n) * num_) % den_ == 0;
}

Index CoresetConfig::resolve(Index n) const {
  Index target = 0;
  if (const auto* m = std::get_if<Index>(&target_)) {
    target = *m;
  } else {
    target = std::max<Index>(1, std::get<SamplingRate>(target_).floor_times(n));
  }
  if (target < 1 || target > n) {
    std::ostringstream msg;
    msg << "coreset target " << target << " outside [1, " << n << "]";
    throw Error(ErrorKind::config, msg.str());
  }
  return target;
}

double distance(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  if (a.size() != b.size()) {
    std::ostringstream msg;
    msg << "distance: vector lengths differ (" << a.size() << " vs " << b.size() << ")";
    throw Error(ErrorKind::shape, msg.str());
  }
  return (a - b).norm();
}

CoresetResult greedy_select(const Eigen::Ref<const Matrix>& vectors, Index target) {
  const Index n = vectors.cols();
  if (n == 0) throw Error(ErrorKind::config, "greedy sampling: empty input");
  if (target < 0 || target > n) {
    std::ostringstream msg;
    msg << "greedy sampling: target " << target << " outside [0, " << n << "]";
    throw Error(ErrorKind::config, msg.str());
  }

  CoresetResult out;
  if (target == 0) return out;
  out.indices.reserve(static_cast<std::size_t>(target));

  const Vector anchor = vectors.rowwise().mean();
  std::vector<double> min_dist(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    min_dist[static_cast<std::size_t>(i)] = (vectors.col(i) - anchor).norm();
  }
  out.counter.anchor_comparisons = static_cast<std::uint64_t>(n);

  for (Index step = 0; step < target; ++step) {
    Index pick = 0;
    for (Index i = 1; i < n; ++i) {
      if (min_dist[static_cast<std::size_t>(i)] > min_dist[static_cast<std::size_t>(pick)]) pick = i;
    }
    out.indices.push_back(pick);
    // Full rescan, the chosen column included (its distance becomes 0).
    for (Index i = 0; i < n; ++i) {
      const double d = (vectors.col(i) - vectors.col(pick)).norm();
      auto& slot = min_dist[static_cast<std::size_t>(i)];
      if (d < slot) slot = d;
    }
    out.counter.greedy_comparisons += static_cast<std::uint64_t>(n);
  }
  return out;
}

CoresetResult greedy_sample(const Eigen::Ref<const Matrix>& vectors, const CoresetConfig& config) {
  if (vectors.cols() == 0) throw Error(ErrorKind::config, "greedy sampling: empty input");
  return greedy_select(vectors, config.resolve(vectors.cols()));
}

double coverage_radius(const Eigen::Ref<const Matrix>& vectors,
                       const std::vector<Index>& selected) {
  if (selected.empty()) return std::numeric_limits<double>::infinity();
  double radius = 0.0;
  for (Index i = 0; i < vectors.cols(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Index j : selected) best = std::min(best, (vectors.col(i) - vectors.col(j)).norm());
    radius = std::max(radius, best);
  }
  return radius;
}

}  // namespace streambank

#include "streambank/cost_model.hpp"

#include <sstream>

namespace streambank {

namespace {

__extension__ typedef __int128 i128;

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Minimal exact fraction; denominators stay positive and reduced.
struct Fraction {
  i128 num = 0;
  i128 den = 1;

  Fraction(i128 n, i128 d) : num(n), den(d) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const i128 g = gcd128(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  friend Fraction operator*(const Fraction& a, const Fraction& b) {
    return Fraction(a.num * b.num, a.den * b.den);
  }
  friend Fraction operator-(const Fraction& a, const Fraction& b) {
    return Fraction(a.num * b.den - b.num * a.den, a.den * b.den);
  }
};

std::uint64_t to_count(const Fraction& f, const char* what) {
  if (f.den != 1 || f.num < 0) {
    throw Error(ErrorKind::numerical, std::string(what) + " is not a non-negative integer");
  }
  return static_cast<std::uint64_t>(f.num);
}

void require_valid(const CostQuery& q) {
  if (q.batch < 1 || q.n_total < q.batch) {
    std::ostringstream msg;
    msg << "cost query requires N >= B >= 1, got N=" << q.n_total << " B=" << q.batch;
    throw Error(ErrorKind::config, msg.str());
  }
}

void require_exact(const CostQuery& q) {
  require_valid(q);
  if (q.n_total % q.batch != 0) {
    std::ostringstream msg;
    msg << "incremental cost requires B | N, got N=" << q.n_total << " B=" << q.batch;
    throw Error(ErrorKind::config, msg.str());
  }
  if (!q.rate.integral_times(q.batch)) {
    std::ostringstream msg;
    msg << "incremental cost requires integral r*B, got r=" << q.rate.numerator() << "/"
        << q.rate.denominator() << " B=" << q.batch;
    throw Error(ErrorKind::config, msg.str());
  }
}

}  // namespace

bool incremental_prediction_defined(const CostQuery& q) noexcept {
  return q.batch >= 1 && q.n_total >= q.batch && q.n_total % q.batch == 0 &&
         q.rate.integral_times(q.batch);
}

std::uint64_t predict_batchless(const CostQuery& q) {
  require_valid(q);
  return static_cast<std::uint64_t>(q.n_total) *
         static_cast<std::uint64_t>(q.rate.floor_times(q.n_total));
}

std::uint64_t predict_incremental_sum(const CostQuery& q) {
  require_exact(q);
  const i128 rb = q.rate.floor_times(q.batch);  // exact by require_exact
  const i128 batches = q.n_total / q.batch;
  i128 total = 0;
  for (i128 b = 1; b <= batches; ++b) {
    const i128 pool = q.batch + rb * (b - 1);
    const i128 selected = rb * b;
    total += pool * selected;
  }
  return static_cast<std::uint64_t>(total);
}

ClosedFormCost predict_incremental_closed(const CostQuery& q) {
  require_exact(q);
  const Fraction r(q.rate.numerator(), q.rate.denominator());
  const Fraction r2 = r * r;
  const i128 n = q.n_total;
  const i128 b = q.batch;

  const Fraction half = r * Fraction(n * (n + b), 2);
  const Fraction extra =
      r2 * Fraction(n * (n + b) * (2 * n + b), 6 * b) - r2 * Fraction(n * (n + b), 2);
  return ClosedFormCost{to_count(half, "half term"), to_count(extra, "extra term")};
}

}  // namespace streambank

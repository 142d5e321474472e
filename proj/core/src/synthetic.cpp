#include "streambank/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace streambank::synthetic {

Matrix gaussian(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = normal(rng);
  }
  return out;
}

Matrix orthonormal(Index m, Index k, std::uint64_t seed) {
  const Matrix g = gaussian(m, k, seed);
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(m, k);
}

Matrix low_rank(Index m, Index n, Index rank, std::uint64_t seed) {
  return gaussian(m, rank, seed) * gaussian(rank, n, seed + 0x9e3779b97f4a7c15ULL);
}

namespace {

// Closed curve in R^latent built from harmonics; amplitudes decay so the
// latent directions carry distinct energy.
struct Curve {
  Index latent;

  Vector point(double t) const {
    Vector z(latent);
    for (Index i = 0; i < latent; ++i) {
      const double h = static_cast<double>(i / 2 + 1);
      z(i) = (i % 2 == 0 ? std::cos(h * t) : std::sin(h * t)) / h;
    }
    return z;
  }

  Vector tangent(double t) const {
    Vector z(latent);
    for (Index i = 0; i < latent; ++i) {
      const double h = static_cast<double>(i / 2 + 1);
      z(i) = i % 2 == 0 ? -std::sin(h * t) : std::cos(h * t);
    }
    return z.normalized();
  }
};

}  // namespace

DetectionTask make_detection_task(const DetectionSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> normal(0.0, 1.0);

  const Matrix basis = orthonormal(spec.m, spec.latent, spec.seed ^ 0xa5a5a5a5ULL);
  const Curve curve{spec.latent};
  const double per_axis = spec.sigma / std::sqrt(static_cast<double>(spec.latent));

  auto deviation = [&] {
    Vector e(spec.latent);
    for (Index i = 0; i < spec.latent; ++i) e(i) = per_axis * normal(rng);
    return e;
  };
  auto normal_point = [&] { return Vector(curve.point(angle(rng)) + deviation()); };
  auto anomalous_point = [&] {
    const double t = angle(rng);
    Vector d(spec.latent);
    for (Index i = 0; i < spec.latent; ++i) d(i) = normal(rng);
    const Vector tan = curve.tangent(t);
    d -= d.dot(tan) * tan;
    d.normalize();
    return Vector(curve.point(t) + spec.displacement * spec.sigma * d + deviation());
  };

  DetectionTask task;
  Matrix latent_train(spec.latent, spec.n_train);
  for (Index j = 0; j < spec.n_train; ++j) latent_train.col(j) = normal_point();
  task.train = basis * latent_train;

  const Index n_test = spec.n_test_normal + spec.n_test_anomalous;
  Matrix latent_test(spec.latent, n_test);
  task.labels.reserve(static_cast<std::size_t>(n_test));
  // Interleave so any prefix of the test set holds both classes.
  Index made_normal = 0, made_anomalous = 0;
  for (Index j = 0; j < n_test; ++j) {
    const bool want_anomaly =
        made_anomalous < spec.n_test_anomalous &&
        (made_normal >= spec.n_test_normal || j % 2 == 1);
    if (want_anomaly) {
      latent_test.col(j) = anomalous_point();
      task.labels.push_back(1);
      ++made_anomalous;
    } else {
      latent_test.col(j) = normal_point();
      task.labels.push_back(0);
      ++made_normal;
    }
  }
  task.test = basis * latent_test;
  return task;
}

}  // namespace streambank::synthetic

#pragma once

// Deterministic synthetic data for tests, benchmarks and `bench-sampling`.
// Every generator is a pure function of its arguments (fixed-seed mt19937_64).

#include <cstdint>
#include <vector>

#include "streambank/dense.hpp"

namespace streambank::synthetic {

/// rows x cols matrix of independent standard normal entries.
Matrix gaussian(Index rows, Index cols, std::uint64_t seed);

/// m x k matrix with orthonormal columns (QR of a Gaussian matrix).
Matrix orthonormal(Index m, Index k, std::uint64_t seed);

/// m x n matrix of exact rank `rank`: (m x rank) * (rank x n) Gaussian factors.
Matrix low_rank(Index m, Index n, Index rank, std::uint64_t seed);

struct DetectionSpec {
  Index m = 64;                 ///< ambient dimension
  Index latent = 8;             ///< rank of the subspace holding the manifold
  Index n_train = 2048;
  Index n_test_normal = 200;
  Index n_test_anomalous = 200;
  double sigma = 0.05;          ///< RMS off-manifold deviation of normal vectors
  double displacement = 5.0;    ///< anomaly offset in units of sigma
  std::uint64_t seed = 7;
};

struct DetectionTask {
  Matrix train;             ///< m x n_train normal vectors
  Matrix test;              ///< m x (n_test_normal + n_test_anomalous)
  std::vector<int> labels;  ///< 0 normal, 1 anomalous, aligned with test columns
};

/// Normal vectors lie near a closed curve spanning a `latent`-dimensional
/// subspace, with Gaussian deviations of RMS norm sigma inside that subspace.
/// Anomalies sit displacement * sigma away from the curve, in a direction
/// orthogonal to its tangent, plus the same deviation noise.
DetectionTask make_detection_task(const DetectionSpec& spec);

}  // namespace streambank::synthetic

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "streambank/error.hpp"
#include "streambank/reducer.hpp"
#include "streambank/synthetic.hpp"

using namespace streambank;

namespace {

IncrementalReducer stream(const Matrix& x, Index k, Index nb, Precision p = Precision::f64) {
  IncrementalReducer r(ReducerConfig{k, nb, p});
  for (Index start = 0; start < x.cols(); start += nb) {
    r.ingest_batch(x.middleCols(start, std::min(nb, x.cols() - start)));
  }
  return r;
}

Matrix all_coords(const IncrementalReducer& r, const Finalization& f) {
  Matrix out(f.basis.k_effective(), r.total_vectors());
  Index col = 0;
  for (std::size_t b = 0; b < r.archive().size(); ++b) {
    const Matrix c = reduce_batch(f.rotations[b], r.archive()[b]);
    out.middleCols(col, c.cols()) = c;
    col += c.cols();
  }
  return out;
}

Matrix gram_sum(const Matrix& x) { return oracle::naive_matmul(x, x.transpose()); }

}  // namespace

TEST(Reducer, ConfigValidation) {
  EXPECT_THROW(IncrementalReducer(ReducerConfig{0, 4, Precision::f64}), Error);
  EXPECT_THROW(IncrementalReducer(ReducerConfig{2, 0, Precision::f64}), Error);
}

TEST(Reducer, SingleBatchEqualsOneShotSvd) {
  const Matrix x = synthetic::gaussian(16, 40, 1);
  auto r = stream(x, 5, 40);
  const auto direct = truncated_svd(x, 5);
  EXPECT_LE((r.current_basis() - direct.u).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((r.current_singular_values() - direct.s).cwiseAbs().maxCoeff(), 1e-12);

  const Finalization f = r.finalize();
  // u_final = u_1, so r_1 = diag(s_1).
  Matrix expect = Matrix::Zero(5, 5);
  expect.diagonal() = direct.s;
  EXPECT_LE((f.rotations[0].r - expect).cwiseAbs().maxCoeff(), 1e-10);
  const Matrix coords = all_coords(r, f);
  EXPECT_LE((coords - direct.s.asDiagonal() * direct.v.transpose()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Reducer, ExactRankFourBatchesRecoversSpectrum) {
  const Matrix x = synthetic::low_rank(24, 200, 5, 2);
  auto r = stream(x, 6, 50);
  ASSERT_EQ(r.batch_count(), 4);
  const oracle::Svd ref = oracle::lapack_svd(x);
  const Vector& s = r.current_singular_values();
  ASSERT_EQ(s.size(), 5);
  for (Index i = 0; i < 5; ++i) EXPECT_NEAR(s(i) / ref.s(i), 1.0, 1e-8);
}

TEST(Reducer, OrthogonalBatchesReproduceGramSum) {
  Matrix x1 = Matrix::Zero(6, 3), x2 = Matrix::Zero(6, 3);
  x1(0, 0) = 2; x1(1, 1) = 1; x1(0, 2) = 1;
  x2(3, 0) = 3; x2(4, 1) = 0.5; x2(5, 2) = 1.5;
  IncrementalReducer r(ReducerConfig{6, 3, Precision::f64});
  r.ingest_batch(x1);
  r.ingest_batch(x2);
  const Matrix& u = r.current_basis();
  const Vector s2 = r.current_singular_values().array().square();
  const Matrix g = u * s2.asDiagonal() * u.transpose();
  const Matrix expect = gram_sum(x1) + gram_sum(x2);
  EXPECT_LE((g - expect).norm(), 1e-12 * expect.norm());
}

TEST(Reducer, GramSumAnySplit) {
  const Matrix x = synthetic::low_rank(20, 96, 4, 9);
  const Matrix expect = gram_sum(x);
  for (Index nb : {1, 5, 7, 32, 96}) {
    auto r = stream(x, 4, nb);
    const Matrix& u = r.current_basis();
    const Vector s2 = r.current_singular_values().array().square();
    const Matrix g = u * s2.asDiagonal() * u.transpose();
    EXPECT_LE((g - expect).norm() / expect.norm(), 1e-8) << "n_b=" << nb;
  }
}

TEST(Reducer, RotatedBatchesMatchProjection) {
  const Matrix x = synthetic::low_rank(30, 90, 6, 4);
  auto r = stream(x, 6, 30);
  const Finalization f = r.finalize();
  for (std::size_t b = 0; b < 3; ++b) {
    const Matrix xb = x.middleCols(static_cast<Index>(b) * 30, 30);
    const Matrix expect = oracle::naive_matmul(f.basis.u.transpose(), xb);
    const Matrix got = reduce_batch(f.rotations[b], r.archive()[b]);
    EXPECT_LE((got - expect).norm() / expect.norm(), 1e-8);
    // Exact rank: projection preserves column norms.
    for (Index j = 0; j < xb.cols(); ++j) {
      EXPECT_NEAR(got.col(j).norm() / xb.col(j).norm(), 1.0, 1e-6);
    }
  }
}

TEST(Reducer, ReduceBatchEqualsProjectingReconstruction) {
  const Matrix x = synthetic::gaussian(12, 40, 5);
  auto r = stream(x, 4, 10);
  const Finalization f = r.finalize();
  for (std::size_t b = 0; b < r.archive().size(); ++b) {
    const auto& d = r.archive()[b];
    const Matrix rec = d.u * d.s.asDiagonal() * d.v.transpose();
    const Matrix expect = project_query(f.basis, rec);
    EXPECT_LE((reduce_batch(f.rotations[b], d) - expect).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Reducer, ReduceBatchIdentityRows) {
  BatchDecomposition d;
  d.s = Vector::LinSpaced(3, 3.0, 1.0);
  d.u = Matrix::Identity(5, 3);
  d.v = Matrix::Identity(3, 3);
  d.batch_index = 1;
  d.batch_size = 3;
  RotationMatrix rot{Matrix(d.s.asDiagonal()), 1};
  EXPECT_EQ(reduce_batch(rot, d), Matrix(d.s.asDiagonal()));
  rot.batch_index = 2;
  try {
    reduce_batch(rot, d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::state);
  }
}

TEST(Reducer, ZeroBatchLeavesStateAndMapsToZero) {
  const Matrix x = synthetic::low_rank(10, 8, 3, 6);
  IncrementalReducer r(ReducerConfig{3, 8, Precision::f64});
  r.ingest_batch(x);
  const Matrix u_before = r.current_basis();
  const Vector s_before = r.current_singular_values();
  r.ingest_batch(Matrix::Zero(10, 4));
  EXPECT_EQ(r.current_basis(), u_before);
  EXPECT_EQ(r.current_singular_values(), s_before);
  EXPECT_EQ(r.archive()[1].rank(), 0);
  const Finalization f = r.finalize();
  const Matrix zero_coords = reduce_batch(f.rotations[1], r.archive()[1]);
  EXPECT_EQ(zero_coords.rows(), 3);
  EXPECT_EQ(zero_coords.cols(), 4);
  EXPECT_EQ(zero_coords.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Reducer, LeadingZeroBatchThenData) {
  IncrementalReducer r(ReducerConfig{2, 4, Precision::f64});
  r.ingest_batch(Matrix::Zero(5, 4));
  EXPECT_EQ(r.current_basis().cols(), 0);
  const Matrix x = synthetic::low_rank(5, 4, 2, 3);
  r.ingest_batch(x);
  EXPECT_EQ(r.current_basis().cols(), 2);
  const Finalization f = r.finalize();
  EXPECT_LE((reduce_batch(f.rotations[1], r.archive()[1]) - f.basis.u.transpose() * x).norm(),
            1e-10 * x.norm());
}

TEST(Reducer, RankGrowsLazilyWithSmallBatches) {
  const Matrix x = synthetic::gaussian(10, 12, 7);
  IncrementalReducer r(ReducerConfig{6, 2, Precision::f64});
  std::vector<Index> ranks;
  for (Index s = 0; s < 12; s += 2) {
    r.ingest_batch(x.middleCols(s, 2));
    ranks.push_back(r.current_basis().cols());
  }
  EXPECT_EQ(ranks, (std::vector<Index>{2, 4, 6, 6, 6, 6}));
}

TEST(Reducer, MemoryAccounting) {
  const Index m = 20, nb = 16, k = 5;
  const Matrix x = synthetic::gaussian(m, 70, 3);
  auto r = stream(x, k, nb);
  Index expected = 0;
  for (const auto& d : r.archive()) {
    EXPECT_LE(d.stored_values(), d.rank() * (m + d.batch_size + 1));
    EXPECT_LE(d.u.cols(), k);
    expected += d.stored_values();
  }
  expected += r.current_basis().size() + r.current_singular_values().size();
  EXPECT_EQ(r.stored_values(), expected);
  EXPECT_EQ(r.total_vectors(), 70);
  Index sizes = 0;
  Index last_index = 0;
  for (const auto& d : r.archive()) {
    sizes += d.batch_size;
    EXPECT_EQ(d.batch_index, last_index + 1);
    last_index = d.batch_index;
  }
  EXPECT_EQ(sizes, 70);
}

TEST(Reducer, MonotoneTopSingularValue) {
  const Matrix x = synthetic::gaussian(15, 200, 13);
  IncrementalReducer r(ReducerConfig{4, 20, Precision::f64});
  double prev = 0.0;
  for (Index s = 0; s < 200; s += 20) {
    r.ingest_batch(x.middleCols(s, 20));
    const double top = r.current_singular_values()(0);
    EXPECT_GE(top, prev - 1e-10);
    prev = top;
    EXPECT_LE(orthonormality_error(r.current_basis()), 1e-10);
  }
}

TEST(Reducer, SubspaceAngleUnderSmallNoise) {
  const Index m = 40, n = 600, rank = 5;
  const Matrix clean = synthetic::low_rank(m, n, rank, 17);
  const oracle::Svd clean_svd = oracle::lapack_svd(clean);
  const double sigma = 0.01 * clean_svd.s(rank - 1) / std::sqrt(static_cast<double>(n));
  const Matrix x = clean + sigma * synthetic::gaussian(m, n, 18);
  auto r = stream(x, rank, 60);
  const oracle::Svd ref = oracle::lapack_svd(x);
  EXPECT_LE(oracle::max_principal_angle_deg(r.current_basis(), ref.u.leftCols(rank)), 10.0);
}

TEST(Reducer, BatchOrderIndependentOnCommonSubspace) {
  const Matrix x = synthetic::low_rank(16, 64, 3, 23);
  Matrix reversed(16, 64);
  for (Index j = 0; j < 64; ++j) reversed.col(j) = x.col(63 - j);
  for (const Matrix* data : std::initializer_list<const Matrix*>{&x, &reversed}) {
    auto r = stream(*data, 3, 16);
    const Finalization f = r.finalize();
    const Matrix coords = all_coords(r, f);
    EXPECT_LE((coords - f.basis.u.transpose() * *data).norm(), 1e-10 * data->norm());
  }
}

TEST(Reducer, InputErrors) {
  IncrementalReducer r(ReducerConfig{2, 4, Precision::f64});
  EXPECT_THROW(r.finalize(), Error);
  try {
    r.ingest_batch(Matrix(3, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::data);
  }
  EXPECT_THROW(r.ingest_batch(Matrix::Ones(3, 5)), Error);
  r.ingest_batch(Matrix::Ones(3, 2));
  try {
    r.ingest_batch(Matrix::Ones(4, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::shape);
  }
}

TEST(ProjectQuery, Examples) {
  const Matrix x = synthetic::gaussian(10, 30, 31);
  auto r = stream(x, 4, 30);
  const FinalBasis basis = r.finalize().basis;
  for (Index j = 0; j < 4; ++j) {
    const Matrix e = project_query(basis, basis.u.col(j));
    for (Index i = 0; i < 4; ++i) EXPECT_NEAR(e(i, 0), i == j ? 1.0 : 0.0, 1e-12);
  }
  Vector y = synthetic::gaussian(10, 1, 32);
  y -= basis.u * (basis.u.transpose() * y);
  EXPECT_LE(project_query(basis, y).norm(), 1e-12);

  const Matrix q = synthetic::gaussian(10, 50, 33);
  const Matrix p = project_query(basis, q);
  for (Index j = 0; j < 50; ++j) EXPECT_LE(p.col(j).norm(), q.col(j).norm() + 1e-12);
  EXPECT_THROW(project_query(basis, Matrix::Ones(9, 1)), Error);
}

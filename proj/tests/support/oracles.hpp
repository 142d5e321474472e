#pragma once

// Independent reference implementations used only by tests. None of these
// call into the library's numerical kernels.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Svd {
  Matrix u;   // m x min(m,n)
  Vector s;
  Matrix vt;  // min(m,n) x n
};

// LAPACK dgesvd on a copy of x.
Svd lapack_svd(const Matrix& x);

// Triple loop a * b.
Matrix naive_matmul(const Matrix& a, const Matrix& b);

// Flip columns of `u` (and rows of `vt`, if given) so the largest-|u| entry is
// positive, first row winning ties.
void canonical_signs(Matrix& u, Matrix* vt);

// Largest principal angle in degrees between the column spaces of a and b
// (both orthonormal).
double max_principal_angle_deg(const Matrix& a, const Matrix& b);

// Mean-anchored farthest point sampling recomputing every min-distance from
// scratch on every iteration.
std::vector<Eigen::Index> naive_greedy(const Matrix& x, Eigen::Index target);

// Nearest-neighbor distance of each projected query to the bank, plain loops.
struct Nearest {
  std::vector<double> dist;
  std::vector<Eigen::Index> index;
};
Nearest brute_force_nearest(const Matrix& basis, const Matrix& bank, const Matrix& queries);

// Pairwise AUROC: (#{pos > neg} + #{pos == neg} / 2) / (n_pos * n_neg).
double pairwise_auroc(const std::vector<double>& scores, const std::vector<int>& labels);

// sum_{b=1}^{N/B} (B + (b-1) rB) * (b rB), all integers, using s = rB.
std::uint64_t incremental_sum_direct(std::uint64_t n, std::uint64_t b, std::uint64_t s);

// Fresh empty directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& bytes);

}  // namespace oracle

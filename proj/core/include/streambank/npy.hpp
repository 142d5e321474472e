#pragma once

// ".npy" v1.0 reading and writing, restricted to C-order little-endian
// float32/float64 arrays.
//
// On disk a feature file has shape (n_vectors, m): one vector per row. In
// memory the same data is an m x n matrix with one vector per column, so the
// transpose happens whenever a block is loaded or stored.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "streambank/dense.hpp"

namespace streambank {

enum class DType { f4, f8 };

std::string_view descr(DType dtype) noexcept;  // "<f4" | "<f8"
std::size_t item_size(DType dtype) noexcept;
DType dtype_for(Precision p) noexcept;
Precision precision_of(DType dtype) noexcept;

struct ArrayHeader {
  DType dtype = DType::f8;
  bool fortran_order = false;
  std::vector<Index> shape;
  std::size_t data_offset = 0;  ///< byte offset of the first element

  Index element_count() const noexcept;
  /// Rows on disk (vectors) for a 2-D array.
  Index vectors() const { return shape.at(0); }
  /// Columns on disk (feature dimension) for a 2-D array.
  Index dimension() const { return shape.at(1); }
};

/// Parse the header at the start of `in`. Accepts any rank; rejects bad magic,
/// versions other than 1.0, dtypes other than <f4/<f8 and Fortran order.
ArrayHeader parse_header(std::istream& in, std::string_view source);

/// Header of a 2-D feature file.
ArrayHeader read_header(const std::filesystem::path& path);

/// Header bytes (magic through trailing newline) for the given array.
std::string encode_header(DType dtype, const std::vector<Index>& shape);

/// Store the m x n matrix as an (n, m) array of `dtype`.
void write_matrix(const std::filesystem::path& path, const Eigen::Ref<const Matrix>& x, DType dtype);
/// Load a whole (n, m) file as an m x n matrix.
Matrix read_matrix(const std::filesystem::path& path);

void write_vector(const std::filesystem::path& path, const Eigen::Ref<const Vector>& x, DType dtype);
Vector read_vector(const std::filesystem::path& path);

/// Sequential reader that yields m x (<= capacity) batches across one or more
/// files. Only the current batch is resident; batches span file boundaries.
class BatchStream {
 public:
  BatchStream(std::vector<std::filesystem::path> sources, Index capacity);

  /// Next batch, or nullopt once every source is exhausted.
  std::optional<Matrix> next_batch();

  Index dimension() const noexcept { return m_; }
  DType dtype() const noexcept { return dtype_; }
  Index capacity() const noexcept { return capacity_; }
  Index total_vectors() const noexcept { return total_; }
  /// Index of the next vector to be yielded.
  Index cursor() const noexcept { return cursor_; }

 private:
  void open_source(std::size_t i);

  std::vector<std::filesystem::path> sources_;
  std::vector<ArrayHeader> headers_;
  Index capacity_;
  Index m_ = 0;
  DType dtype_ = DType::f8;
  Index total_ = 0;
  Index cursor_ = 0;

  std::size_t current_ = 0;
  Index row_in_source_ = 0;
  std::ifstream in_;
  std::vector<char> scratch_;
};

}  // namespace streambank

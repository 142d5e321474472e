#include "streambank/npy.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <sstream>

namespace streambank {

static_assert(std::endian::native == std::endian::little,
              "array-io assumes a little-endian host");

namespace {

constexpr char kMagic[] = "\x93NUMPY";
constexpr std::size_t kMagicLen = 6;
constexpr std::size_t kPreludeLen = kMagicLen + 2 + 2;  // magic, version, header length
constexpr std::size_t kAlign = 64;

Error format_error(std::string_view source, const std::string& what) {
  return Error(ErrorKind::format, std::string(source) + ": " + what);
}

// Cursor over the Python dict literal of a v1.0 header.
class DictParser {
 public:
  DictParser(std::string_view text, std::string_view source) : text_(text), source_(source) {}

  ArrayHeader parse() {
    ArrayHeader h;
    bool have_descr = false, have_order = false, have_shape = false;
    expect('{');
    while (true) {
      skip_ws();
      if (peek() == '}') {
        ++pos_;
        break;
      }
      const std::string key = quoted();
      expect(':');
      if (key == "descr") {
        const std::string d = quoted();
        if (d == "<f4") h.dtype = DType::f4;
        else if (d == "<f8") h.dtype = DType::f8;
        else throw format_error(source_, "unsupported dtype 'descr': '" + d + "' (expected <f4 or <f8)");
        have_descr = true;
      } else if (key == "fortran_order") {
        skip_ws();
        if (consume("True")) h.fortran_order = true;
        else if (consume("False")) h.fortran_order = false;
        else throw format_error(source_, "malformed 'fortran_order' value");
        have_order = true;
      } else if (key == "shape") {
        h.shape = tuple();
        have_shape = true;
      } else {
        throw format_error(source_, "unexpected header key '" + key + "'");
      }
      skip_ws();
      if (peek() == ',') ++pos_;
    }
    if (!have_descr) throw format_error(source_, "header lacks 'descr'");
    if (!have_order) throw format_error(source_, "header lacks 'fortran_order'");
    if (!have_shape) throw format_error(source_, "header lacks 'shape'");
    if (h.fortran_order) {
      throw format_error(source_, "'fortran_order': True is not supported (C order required)");
    }
    return h;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) {
      throw format_error(source_, std::string("malformed header: expected '") + c + "'");
    }
    ++pos_;
  }

  bool consume(std::string_view word) {
    if (text_.substr(pos_, word.size()) == word) {
      pos_ += word.size();
      return true;
    }
    return false;
  }

  std::string quoted() {
    skip_ws();
    const char q = peek();
    if (q != '\'' && q != '"') throw format_error(source_, "malformed header: expected a string");
    const auto end = text_.find(q, pos_ + 1);
    if (end == std::string_view::npos) throw format_error(source_, "malformed header: unterminated string");
    std::string out(text_.substr(pos_ + 1, end - pos_ - 1));
    pos_ = end + 1;
    return out;
  }

  std::vector<Index> tuple() {
    expect('(');
    std::vector<Index> dims;
    while (true) {
      skip_ws();
      if (peek() == ')') {
        ++pos_;
        break;
      }
      if (!std::isdigit(static_cast<unsigned char>(peek()))) {
        throw format_error(source_, "malformed 'shape' entry");
      }
      Index v = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        v = v * 10 + (peek() - '0');
        ++pos_;
        if (v > (Index{1} << 48)) throw format_error(source_, "'shape' entry too large");
      }
      skip_ws();
      if (peek() == 'L') ++pos_;  // Python 2 long suffix
      dims.push_back(v);
      skip_ws();
      if (peek() == ',') ++pos_;
    }
    return dims;
  }

  std::string_view text_;
  std::string_view source_;
  std::size_t pos_ = 0;
};

std::string shape_literal(const std::vector<Index>& shape) {
  std::string out = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(shape[i]);
  }
  if (shape.size() == 1) out += ",";
  out += ")";
  return out;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path.string() + "'");
  return in;
}

template <typename T>
void put_values(std::ostream& out, const double* values, std::size_t count) {
  std::vector<T> row(count);
  std::transform(values, values + count, row.begin(), [](double v) { return static_cast<T>(v); });
  out.write(reinterpret_cast<const char*>(row.data()),
            static_cast<std::streamsize>(count * sizeof(T)));
}

void write_column(std::ostream& out, const double* values, std::size_t count, DType dtype) {
  if (dtype == DType::f4) put_values<float>(out, values, count);
  else put_values<double>(out, values, count);
}

double decode(const char* p, DType dtype) {
  if (dtype == DType::f4) {
    float f;
    std::memcpy(&f, p, sizeof f);
    return f;
  }
  double d;
  std::memcpy(&d, p, sizeof d);
  return d;
}

// Read `rows` disk rows of `cols` items into consecutive columns of `dst`.
void read_rows(std::istream& in, const std::filesystem::path& path, const ArrayHeader& h,
               Index first_row, Index rows, Index cols, Eigen::Ref<Matrix> dst,
               std::vector<char>& scratch) {
  const std::size_t bytes =
      static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) * item_size(h.dtype);
  scratch.resize(bytes);
  in.read(scratch.data(), static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(in.gcount()) != bytes) {
    throw Error(ErrorKind::format, path.string() + ": truncated data (expected " +
                                       std::to_string(h.element_count()) + " elements)");
  }
  const std::size_t isz = item_size(h.dtype);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const double v = decode(scratch.data() + (static_cast<std::size_t>(r * cols + c)) * isz, h.dtype);
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << path.string() << ": non-finite value at row " << first_row + r << ", column " << c;
        throw Error(ErrorKind::data, msg.str());
      }
      dst(c, r) = v;
    }
  }
}

}  // namespace

std::string_view descr(DType dtype) noexcept { return dtype == DType::f4 ? "<f4" : "<f8"; }

std::size_t item_size(DType dtype) noexcept { return dtype == DType::f4 ? 4 : 8; }

DType dtype_for(Precision p) noexcept { return p == Precision::f32 ? DType::f4 : DType::f8; }

Precision precision_of(DType dtype) noexcept {
  return dtype == DType::f4 ? Precision::f32 : Precision::f64;
}

Index ArrayHeader::element_count() const noexcept {
  Index n = 1;
  for (Index d : shape) n *= d;
  return n;
}

ArrayHeader parse_header(std::istream& in, std::string_view source) {
  char prelude[kPreludeLen];
  in.read(prelude, kPreludeLen);
  if (static_cast<std::size_t>(in.gcount()) != kPreludeLen) {
    throw format_error(source, "file too short for an .npy header");
  }
  if (std::memcmp(prelude, kMagic, kMagicLen) != 0) {
    throw format_error(source, "bad magic (expected \\x93NUMPY)");
  }
  const auto major = static_cast<unsigned char>(prelude[6]);
  const auto minor = static_cast<unsigned char>(prelude[7]);
  if (major != 1 || minor != 0) {
    throw format_error(source, "unsupported format version " + std::to_string(major) + "." +
                                   std::to_string(minor) + " (only 1.0)");
  }
  const std::size_t header_len = static_cast<unsigned char>(prelude[8]) |
                                 (static_cast<std::size_t>(static_cast<unsigned char>(prelude[9])) << 8);
  std::string text(header_len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(header_len));
  if (static_cast<std::size_t>(in.gcount()) != header_len) {
    throw format_error(source, "truncated header");
  }
  ArrayHeader h = DictParser(text, source).parse();
  h.data_offset = kPreludeLen + header_len;
  return h;
}

ArrayHeader read_header(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  ArrayHeader h = parse_header(in, path.string());
  if (h.shape.size() != 2) {
    throw format_error(path.string(), "'shape' must be 2-D (n_vectors, m), got " +
                                          shape_literal(h.shape));
  }
  return h;
}

std::string encode_header(DType dtype, const std::vector<Index>& shape) {
  std::string dict = "{'descr': '" + std::string(descr(dtype)) +
                     "', 'fortran_order': False, 'shape': " + shape_literal(shape) + ", }";
  const std::size_t unpadded = kPreludeLen + dict.size() + 1;  // +1 for '\n'
  const std::size_t padding = (kAlign - unpadded % kAlign) % kAlign;
  dict.append(padding, ' ');
  dict.push_back('\n');

  std::string out(kMagic, kMagicLen);
  out.push_back('\x01');
  out.push_back('\x00');
  out.push_back(static_cast<char>(dict.size() & 0xff));
  out.push_back(static_cast<char>((dict.size() >> 8) & 0xff));
  out += dict;
  return out;
}

void write_matrix(const std::filesystem::path& path, const Eigen::Ref<const Matrix>& x, DType dtype) {
  std::ofstream out = open_for_write(path);
  const std::string header = encode_header(dtype, {x.cols(), x.rows()});
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  Vector column(x.rows());
  for (Index j = 0; j < x.cols(); ++j) {
    column = x.col(j);
    write_column(out, column.data(), static_cast<std::size_t>(x.rows()), dtype);
  }
  if (!out) throw Error(ErrorKind::io, "write to '" + path.string() + "' failed");
}

Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  ArrayHeader h = parse_header(in, path.string());
  if (h.shape.size() != 2) {
    throw format_error(path.string(), "'shape' must be 2-D, got " + shape_literal(h.shape));
  }
  Matrix out(h.dimension(), h.vectors());
  std::vector<char> scratch;
  read_rows(in, path, h, 0, h.vectors(), h.dimension(), out, scratch);
  return out;
}

void write_vector(const std::filesystem::path& path, const Eigen::Ref<const Vector>& x, DType dtype) {
  std::ofstream out = open_for_write(path);
  const std::string header = encode_header(dtype, {x.size()});
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  const Vector copy = x;
  write_column(out, copy.data(), static_cast<std::size_t>(copy.size()), dtype);
  if (!out) throw Error(ErrorKind::io, "write to '" + path.string() + "' failed");
}

Vector read_vector(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  ArrayHeader h = parse_header(in, path.string());
  if (h.shape.size() != 1) {
    throw format_error(path.string(), "'shape' must be 1-D, got " + shape_literal(h.shape));
  }
  Matrix tmp(1, h.shape[0]);
  std::vector<char> scratch;
  read_rows(in, path, h, 0, h.shape[0], 1, tmp, scratch);
  return tmp.row(0).transpose();
}

BatchStream::BatchStream(std::vector<std::filesystem::path> sources, Index capacity)
    : sources_(std::move(sources)), capacity_(capacity) {
  if (capacity_ < 1) throw Error(ErrorKind::config, "batch capacity must be >= 1");
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    ArrayHeader h = read_header(sources_[i]);
    if (i == 0) {
      m_ = h.dimension();
      dtype_ = h.dtype;
    } else if (h.dimension() != m_ || h.dtype != dtype_) {
      std::ostringstream msg;
      msg << sources_[i].string() << ": dimension/dtype (" << h.dimension() << ", "
          << descr(h.dtype) << ") differs from first source (" << m_ << ", " << descr(dtype_)
          << ")";
      throw Error(ErrorKind::data, msg.str());
    }
    total_ += h.vectors();
    headers_.push_back(std::move(h));
  }
  if (!sources_.empty()) open_source(0);
}

void BatchStream::open_source(std::size_t i) {
  current_ = i;
  row_in_source_ = 0;
  in_ = open_for_read(sources_[i]);
  in_.seekg(static_cast<std::streamoff>(headers_[i].data_offset));
}

std::optional<Matrix> BatchStream::next_batch() {
  if (cursor_ >= total_) return std::nullopt;
  const Index take = std::min(capacity_, total_ - cursor_);
  Matrix batch(m_, take);
  Index filled = 0;
  while (filled < take) {
    const ArrayHeader& h = headers_[current_];
    const Index left = h.vectors() - row_in_source_;
    if (left == 0) {
      open_source(current_ + 1);
      continue;
    }
    const Index n = std::min(left, take - filled);
    read_rows(in_, sources_[current_], h, row_in_source_, n, m_, batch.middleCols(filled, n),
              scratch_);
    row_in_source_ += n;
    filled += n;
  }
  cursor_ += take;
  return batch;
}

}  // namespace streambank

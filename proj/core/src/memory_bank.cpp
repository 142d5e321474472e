#include "streambank/memory_bank.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "streambank/npy.hpp"

namespace streambank {

namespace {

using json = nlohmann::json;

Error inconsistent(const std::string& what) {
  return Error(ErrorKind::shape, "inconsistent memory bank: " + what);
}

}  // namespace

MemoryBank::MemoryBank(FinalBasis basis, Matrix coords, BankMeta meta)
    : basis_(std::move(basis)), coords_(std::move(coords)), meta_(std::move(meta)) {
  if (coords_.cols() < 1) throw Error(ErrorKind::data, "memory bank is empty");
  if (coords_.rows() != basis_.k_effective()) {
    std::ostringstream msg;
    msg << "coords have " << coords_.rows() << " rows, basis has k_effective "
        << basis_.k_effective();
    throw inconsistent(msg.str());
  }
  if (basis_.s.size() != basis_.k_effective()) throw inconsistent("singular value count");
  if (meta_.m != basis_.m()) throw inconsistent("meta m differs from basis rows");
  require_finite(coords_, "memory bank coords");
  require_finite(basis_.u, "memory bank basis");
}

ScoreReport score_projected(const Eigen::Ref<const Matrix>& bank_coords,
                            const Eigen::Ref<const Matrix>& projected) {
  if (bank_coords.cols() == 0) throw Error(ErrorKind::state, "score: empty memory bank");
  if (projected.rows() != bank_coords.rows()) {
    std::ostringstream msg;
    msg << "score: projected queries have " << projected.rows() << " rows, bank has "
        << bank_coords.rows();
    throw Error(ErrorKind::shape, msg.str());
  }

  ScoreReport out;
  const auto q = static_cast<std::size_t>(projected.cols());
  out.per_vector_scores.resize(q);
  out.nearest_index.resize(q);
  for (Index i = 0; i < projected.cols(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    Index best_j = 0;
    for (Index j = 0; j < bank_coords.cols(); ++j) {
      const double d2 = (projected.col(i) - bank_coords.col(j)).squaredNorm();
      if (d2 < best) {
        best = d2;
        best_j = j;
      }
    }
    out.per_vector_scores[static_cast<std::size_t>(i)] = std::sqrt(best);
    out.nearest_index[static_cast<std::size_t>(i)] = best_j;
  }
  if (!out.per_vector_scores.empty()) out.image_score = aggregate_image(out.per_vector_scores);
  return out;
}

ScoreReport score(const MemoryBank& bank, const Eigen::Ref<const Matrix>& queries) {
  if (queries.rows() != bank.basis().m()) {
    std::ostringstream msg;
    msg << "score: queries have dimension " << queries.rows() << ", bank expects "
        << bank.basis().m();
    throw Error(ErrorKind::shape, msg.str());
  }
  return score_projected(bank.coords(), project_query(bank.basis(), queries));
}

double aggregate_image(std::span<const double> patch_scores) {
  if (patch_scores.empty()) throw Error(ErrorKind::data, "aggregate_image: no patch scores");
  return *std::max_element(patch_scores.begin(), patch_scores.end());
}

void save_bank(const MemoryBank& bank, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create '" + dir.string() + "': " + ec.message());

  const DType dtype = dtype_for(bank.meta().precision);
  write_matrix(dir / "basis.npy", bank.basis().u, dtype);
  write_vector(dir / "svals.npy", bank.basis().s, dtype);
  write_matrix(dir / "bank.npy", bank.coords(), dtype);

  const BankMeta& m = bank.meta();
  json meta = {
      {"format_version", kBankFormatVersion},
      {"k", m.k_requested},
      {"k_effective", bank.k_effective()},
      {"m", m.m},
      {"precision", std::string(to_string(m.precision))},
      {"n_b", m.n_b},
      {"rate", m.rate},
      {"buffer_policy", m.buffer_policy},
      {"vectors_seen", m.vectors_seen},
  };
  std::ofstream out(dir / "meta.json", std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write meta.json in '" + dir.string() + "'");
  out << meta.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::io, "write to meta.json failed");
}

MemoryBank load_bank(const std::filesystem::path& dir) {
  std::ifstream in(dir / "meta.json", std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + (dir / "meta.json").string() + "'");

  json meta;
  try {
    meta = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::format, "meta.json: " + std::string(e.what()));
  }

  BankMeta m;
  Index k_effective = 0;
  try {
    const int version = meta.at("format_version").get<int>();
    if (version != kBankFormatVersion) {
      throw Error(ErrorKind::format, "meta.json: unsupported format_version " +
                                         std::to_string(version));
    }
    m.k_requested = meta.at("k").get<Index>();
    k_effective = meta.at("k_effective").get<Index>();
    m.m = meta.at("m").get<Index>();
    m.precision = parse_precision(meta.at("precision").get<std::string>());
    m.n_b = meta.at("n_b").get<Index>();
    m.rate = meta.at("rate").get<double>();
    m.buffer_policy = meta.at("buffer_policy").get<std::string>();
    m.vectors_seen = meta.at("vectors_seen").get<Index>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::format, "meta.json: " + std::string(e.what()));
  }

  FinalBasis basis{read_matrix(dir / "basis.npy"), read_vector(dir / "svals.npy")};
  Matrix coords = read_matrix(dir / "bank.npy");

  if (k_effective > m.k_requested) throw inconsistent("k_effective exceeds k");
  if (basis.m() != m.m) throw inconsistent("basis.npy dimension differs from meta m");
  if (basis.k_effective() != k_effective) throw inconsistent("basis.npy rank differs from meta k_effective");
  if (basis.s.size() != k_effective) throw inconsistent("svals.npy length differs from meta k_effective");
  if (coords.rows() != k_effective) {
    std::ostringstream msg;
    msg << "bank.npy entries have " << coords.rows() << " coordinates, meta k_effective is "
        << k_effective;
    throw inconsistent(msg.str());
  }
  return MemoryBank(std::move(basis), std::move(coords), std::move(m));
}

}  // namespace streambank

#include "streambank/cli/commands.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "streambank/cost_model.hpp"
#include "streambank/incremental_sampler.hpp"
#include "streambank/memory_bank.hpp"
#include "streambank/npy.hpp"
#include "streambank/reducer.hpp"
#include "streambank/synthetic.hpp"

namespace streambank::cli {

namespace {

using json = nlohmann::json;

constexpr Index kScoreChunk = 4096;
constexpr std::uint64_t kBenchSeed = 0x5eedba5e;

const std::set<std::string> kCommands = {"reduce", "train", "score", "eval", "bench-sampling", "info"};

std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> log = [] {
    auto existing = spdlog::get("streambank");
    return existing ? existing : spdlog::stderr_logger_mt("streambank");
  }();
  return log;
}

void configure_logging() {
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("STREAMBANK_LOG")) {
    level = spdlog::level::from_str(env);  // unknown names map to off
  }
  logger()->set_level(level);
}

// Writes to `path`, or to `fallback` when the path is empty.
class OutputSink {
 public:
  OutputSink(const fs::path& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
    } else {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw Error(ErrorKind::io, "write failed");
  }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

// Stage the files in a sibling directory and then move them into place, so
// a failure part-way never leaves a half-written bank behind.
template <typename WriteFn>
void publish_directory(const fs::path& out, WriteFn&& write) {
  if (fs::exists(out) && !fs::is_directory(out)) {
    throw Error(ErrorKind::config, "output '" + out.string() + "' exists and is not a directory");
  }
  fs::path staging = out;
  staging += ".partial";
  std::error_code ec;
  fs::remove_all(staging, ec);
  try {
    fs::create_directories(staging);
    write(staging);
    fs::create_directories(out);
    for (const auto& entry : fs::directory_iterator(staging)) {
      fs::rename(entry.path(), out / entry.path().filename());
    }
  } catch (...) {
    fs::remove_all(staging, ec);
    throw;
  }
  fs::remove_all(staging, ec);
}

struct Reduction {
  Finalization final;
  std::vector<BatchDecomposition> archive;
  Index vectors = 0;
  Index stored_values = 0;
};

Reduction run_reduction(BatchStream& stream, const RunConfig& cfg, Precision precision) {
  IncrementalReducer reducer(ReducerConfig{cfg.k, cfg.batch_size, precision});
  while (auto batch = stream.next_batch()) {
    reducer.ingest_batch(*batch);
    logger()->debug("batch {}: {} vectors, running rank {}", reducer.batch_count(),
                    batch->cols(), reducer.current_basis().cols());
  }
  if (reducer.batch_count() == 0) throw Error(ErrorKind::data, "no input vectors");
  logger()->info("reduced {} vectors in {} batches to k_effective {}", reducer.total_vectors(),
                 reducer.batch_count(), reducer.current_basis().cols());
  Reduction out;
  out.final = reducer.finalize();
  out.vectors = reducer.total_vectors();
  out.stored_values = reducer.stored_values();
  out.archive = reducer.archive();
  return out;
}

// Reduced coordinates of one archived batch, rounded to the storage precision.
Matrix batch_coords(const Reduction& r, std::size_t b, Precision precision) {
  Matrix coords = reduce_batch(r.final.rotations[b], r.archive[b]);
  round_to(coords, precision);
  return coords;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, '\t')) out.push_back(field);
  if (!line.empty() && line.back() == '\t') out.emplace_back();
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

double parse_double_field(const std::string& text, const fs::path& file, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::format, file.string() + ":" + std::to_string(line) +
                                       ": not a number: '" + text + "'");
  }
  return v;
}

struct ImageGroup {
  std::string id;
  Index start = 0;
  Index end = 0;
};

std::vector<ImageGroup> read_groups(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open groups file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::format, path.string() + ": " + e.what());
  }
  const json& list = doc.is_object() && doc.contains("images") ? doc.at("images") : doc;
  if (!list.is_array()) {
    throw Error(ErrorKind::format, path.string() + ": expected an array of {image_id, start, end}");
  }
  std::vector<ImageGroup> groups;
  try {
    for (const auto& item : list) {
      const json& id = item.at("image_id");
      groups.push_back(ImageGroup{id.is_string() ? id.get<std::string>() : id.dump(),
                                  item.at("start").get<Index>(), item.at("end").get<Index>()});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::format, path.string() + ": " + e.what());
  }
  return groups;
}

std::string json_line(const json& j) { return j.dump(); }

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc{} ? ptr : buf);
}

fs::path image_scores_path(const fs::path& score_tsv) {
  fs::path p = score_tsv;
  p.replace_extension();
  p += ".images.tsv";
  return p;
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config: return 2;
    case ErrorKind::numerical: return 4;
    case ErrorKind::data:
    case ErrorKind::format:
    case ErrorKind::shape:
    case ErrorKind::io:
    case ErrorKind::state: return 3;
  }
  return 3;
}

void validate(const RunConfig& cfg) {
  std::vector<std::string> problems;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  };
  auto check_parse = [&](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      problems.emplace_back(e.what());
    }
  };

  const std::string& c = cfg.command;
  check(kCommands.contains(c), "unknown command '" + c + "'");

  if (c == "reduce" || c == "train") {
    check(!cfg.inputs.empty(), "--input is required");
    check(!cfg.output.empty(), "--output is required");
    check(cfg.k >= 1, "--k must be >= 1");
    check(cfg.batch_size >= 1, "--batch-size must be >= 1");
    check_parse([&] { parse_precision(cfg.precision); });
  }
  if (c == "train") {
    check(cfg.sample_rate.has_value(), "--sample-rate is required");
    if (cfg.sample_rate) check_parse([&] { SamplingRate::parse(*cfg.sample_rate); });
    if (cfg.sample_batch) {
      check(*cfg.sample_batch >= 1, "--sample-batch must be >= 1");
      check(cfg.incremental_sampling, "--sample-batch requires --incremental-sampling");
    }
    if (cfg.buffer) {
      check_parse([&] { BufferPolicy::parse(*cfg.buffer); });
      check(cfg.incremental_sampling, "--buffer requires --incremental-sampling");
    }
  }
  if (c == "score") {
    check(!cfg.bank.empty(), "--bank is required");
    check(!cfg.inputs.empty(), "--input is required");
    check(cfg.groups.empty() || !cfg.output.empty(), "--groups requires --output");
  }
  if (c == "eval") {
    check(cfg.inputs.size() == 1, "--input takes exactly one score file");
    check(!cfg.labels.empty(), "--labels is required");
  }
  if (c == "bench-sampling") {
    check(!cfg.bench_n.empty() || !cfg.inputs.empty(), "--n or --input is required");
    check(cfg.bench_n.empty() || cfg.inputs.empty(), "--n and --input are mutually exclusive");
    check(!cfg.bench_batches.empty(), "--sample-batch is required");
    check(!cfg.bench_rates.empty(), "--sample-rate is required");
    check(cfg.bench_dim >= 1, "--dim must be >= 1");
    for (Index n : cfg.bench_n) check(n >= 1, "--n values must be >= 1");
    for (Index b : cfg.bench_batches) check(b >= 1, "--sample-batch values must be >= 1");
    for (const auto& r : cfg.bench_rates) check_parse([&] { SamplingRate::parse(r); });
    for (const auto& p : cfg.bench_buffers) check_parse([&] { BufferPolicy::parse(p); });
  }
  if (c == "info") check(!cfg.inputs.empty(), "--input is required");

  if (!problems.empty()) {
    std::string msg = "invalid configuration: ";
    for (std::size_t i = 0; i < problems.size(); ++i) {
      if (i > 0) msg += "; ";
      msg += problems[i];
    }
    throw Error(ErrorKind::config, msg);
  }
}

std::string TrainSummary::to_json() const {
  return json_line(json{{"vectors_seen", vectors_seen},
                        {"k_effective", k_effective},
                        {"bank_size", bank_size},
                        {"anchor_comparisons", counter.anchor_comparisons},
                        {"greedy_comparisons", counter.greedy_comparisons},
                        {"peak_stored", peak_stored}});
}

std::string ReduceSummary::to_json() const {
  return json_line(json{{"vectors_seen", vectors_seen},
                        {"k_effective", k_effective},
                        {"batches", batches},
                        {"stored_values", stored_values}});
}

ReduceSummary cmd_reduce(const RunConfig& cfg) {
  validate(cfg);
  const Precision precision = parse_precision(cfg.precision);
  BatchStream stream(cfg.inputs, cfg.batch_size);
  const Reduction r = run_reduction(stream, cfg, precision);

  const Index k_eff = r.final.basis.k_effective();
  Matrix coords(k_eff, r.vectors);
  Index col = 0;
  for (std::size_t b = 0; b < r.archive.size(); ++b) {
    Matrix c = batch_coords(r, b, precision);
    coords.middleCols(col, c.cols()) = c;
    col += c.cols();
  }

  const DType dtype = dtype_for(precision);
  publish_directory(cfg.output, [&](const fs::path& dir) {
    write_matrix(dir / "basis.npy", r.final.basis.u, dtype);
    write_vector(dir / "svals.npy", r.final.basis.s, dtype);
    write_matrix(dir / "coords.npy", coords, dtype);
  });

  return ReduceSummary{r.vectors, k_eff, static_cast<Index>(r.archive.size()), r.stored_values};
}

TrainSummary cmd_train(const RunConfig& cfg) {
  validate(cfg);
  const Precision precision = parse_precision(cfg.precision);
  const SamplingRate rate = SamplingRate::parse(*cfg.sample_rate);
  const BufferPolicy policy =
      cfg.buffer ? BufferPolicy::parse(*cfg.buffer) : BufferPolicy::every_batch();

  BatchStream stream(cfg.inputs, cfg.batch_size);
  const Index n = stream.total_vectors();
  if (n == 0) throw Error(ErrorKind::data, "no input vectors");
  if (rate.floor_times(n) == 0) {
    throw Error(ErrorKind::config, "--sample-rate " + *cfg.sample_rate + " keeps floor(r*N) = 0 of " +
                                       std::to_string(n) + " vectors");
  }

  const Reduction r = run_reduction(stream, cfg, precision);
  const Index k_eff = r.final.basis.k_effective();

  TrainSummary summary;
  summary.vectors_seen = r.vectors;
  summary.k_effective = k_eff;

  Matrix bank_coords;
  if (cfg.incremental_sampling) {
    const Index sample_batch = cfg.sample_batch.value_or(cfg.batch_size);
    IncrementalSampler sampler(IncrementalSamplerConfig{rate, sample_batch, policy});
    Matrix carry(k_eff, 0);
    for (std::size_t b = 0; b < r.archive.size(); ++b) {
      Matrix c = batch_coords(r, b, precision);
      Matrix joined(k_eff, carry.cols() + c.cols());
      joined << carry, c;
      Index used = 0;
      while (joined.cols() - used >= sample_batch) {
        sampler.observe_batch(joined.middleCols(used, sample_batch));
        used += sample_batch;
      }
      carry = joined.rightCols(joined.cols() - used);
    }
    if (carry.cols() > 0) sampler.observe_batch(carry);
    IncrementalResult result = sampler.flush();
    bank_coords = std::move(result.coords);
    summary.counter = result.counter;
    summary.peak_stored = result.peak_stored;
  } else {
    Matrix all(k_eff, r.vectors);
    Index col = 0;
    for (std::size_t b = 0; b < r.archive.size(); ++b) {
      Matrix c = batch_coords(r, b, precision);
      all.middleCols(col, c.cols()) = c;
      col += c.cols();
    }
    const CoresetResult picked = greedy_sample(all, CoresetConfig::rate(rate));
    bank_coords.resize(k_eff, static_cast<Index>(picked.indices.size()));
    for (std::size_t j = 0; j < picked.indices.size(); ++j) {
      bank_coords.col(static_cast<Index>(j)) = all.col(picked.indices[j]);
    }
    summary.counter = picked.counter;
    summary.peak_stored = r.vectors;
  }
  summary.bank_size = bank_coords.cols();

  BankMeta meta;
  meta.k_requested = cfg.k;
  meta.m = r.final.basis.m();
  meta.precision = precision;
  meta.n_b = cfg.batch_size;
  meta.rate = rate.value();
  meta.buffer_policy = cfg.incremental_sampling ? policy.name() : "all";
  meta.vectors_seen = r.vectors;
  const MemoryBank bank(r.final.basis, std::move(bank_coords), meta);

  publish_directory(cfg.output, [&](const fs::path& dir) { save_bank(bank, dir); });
  logger()->info("bank of {} entries written to {}", bank.size(), cfg.output.string());
  return summary;
}

void cmd_score(const RunConfig& cfg, std::ostream& out) {
  validate(cfg);
  const MemoryBank bank = load_bank(cfg.bank);
  BatchStream stream(cfg.inputs, kScoreChunk);
  if (stream.dimension() != bank.basis().m()) {
    std::ostringstream msg;
    msg << "inconsistent inputs: queries have dimension " << stream.dimension()
        << ", bank expects " << bank.basis().m();
    throw Error(ErrorKind::shape, msg.str());
  }

  std::vector<ImageGroup> groups;
  if (!cfg.groups.empty()) groups = read_groups(cfg.groups);

  OutputSink sink(cfg.output, out);
  std::ostream& tsv = sink.get();
  tsv << "vector_index\tscore\tnearest_index\n";
  std::vector<double> all_scores;
  Index index = 0;
  while (auto batch = stream.next_batch()) {
    const ScoreReport report = score(bank, *batch);
    for (std::size_t i = 0; i < report.per_vector_scores.size(); ++i, ++index) {
      tsv << index << '\t' << format_double(report.per_vector_scores[i]) << '\t'
          << report.nearest_index[i] << '\n';
    }
    if (!groups.empty()) {
      all_scores.insert(all_scores.end(), report.per_vector_scores.begin(),
                        report.per_vector_scores.end());
    }
  }
  sink.finish();

  if (!groups.empty()) {
    const fs::path image_path = image_scores_path(cfg.output);
    std::ofstream images(image_path, std::ios::binary | std::ios::trunc);
    if (!images) throw Error(ErrorKind::io, "cannot open '" + image_path.string() + "'");
    images << "image_id\timage_score\n";
    for (const auto& g : groups) {
      if (g.start < 0 || g.end <= g.start || g.end > index) {
        std::ostringstream msg;
        msg << cfg.groups.string() << ": image '" << g.id << "' range [" << g.start << ", "
            << g.end << ") is outside the " << index << " scored vectors";
        throw Error(ErrorKind::data, msg.str());
      }
      const std::span<const double> patch(all_scores.data() + g.start,
                                          static_cast<std::size_t>(g.end - g.start));
      images << g.id << '\t' << format_double(aggregate_image(patch)) << '\n';
    }
    if (!images) throw Error(ErrorKind::io, "write to '" + image_path.string() + "' failed");
  }
}

AurocResult cmd_eval(const RunConfig& cfg, std::ostream& out) {
  validate(cfg);
  const fs::path& score_file = cfg.inputs.front();

  std::ifstream scores_in(score_file);
  if (!scores_in) throw Error(ErrorKind::io, "cannot open '" + score_file.string() + "'");
  std::string line;
  if (!std::getline(scores_in, line)) throw Error(ErrorKind::format, score_file.string() + ": empty file");
  const auto header = split_tabs(strip_cr(line));
  std::size_t score_col = header.size();
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (header[i] == "image_score") score_col = i;
  }
  if (score_col == header.size()) {
    for (std::size_t i = 1; i < header.size(); ++i) {
      if (header[i] == "score") score_col = i;
    }
  }
  if (score_col == header.size()) {
    throw Error(ErrorKind::format, score_file.string() + ": no 'score' or 'image_score' column");
  }

  std::vector<std::pair<std::string, double>> scored;
  std::set<std::string> seen;
  for (std::size_t ln = 2; std::getline(scores_in, line); ++ln) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() <= score_col) {
      throw Error(ErrorKind::format, score_file.string() + ":" + std::to_string(ln) + ": too few columns");
    }
    if (!seen.insert(fields[0]).second) {
      throw Error(ErrorKind::data, score_file.string() + ": duplicate id '" + fields[0] + "'");
    }
    scored.emplace_back(fields[0], parse_double_field(fields[score_col], score_file, ln));
  }

  std::ifstream labels_in(cfg.labels);
  if (!labels_in) throw Error(ErrorKind::io, "cannot open '" + cfg.labels.string() + "'");
  std::map<std::string, int> labels;
  std::getline(labels_in, line);  // header
  for (std::size_t ln = 2; std::getline(labels_in, line); ++ln) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() < 2 || (fields[1] != "0" && fields[1] != "1")) {
      throw Error(ErrorKind::format, cfg.labels.string() + ":" + std::to_string(ln) +
                                         ": expected '<id>\\t<0|1>'");
    }
    if (!labels.emplace(fields[0], fields[1] == "1" ? 1 : 0).second) {
      throw Error(ErrorKind::data, cfg.labels.string() + ": duplicate id '" + fields[0] + "'");
    }
  }

  LabeledScores data;
  for (const auto& [id, s] : scored) {
    const auto it = labels.find(id);
    if (it == labels.end()) {
      throw Error(ErrorKind::data, "misaligned inputs: id '" + id + "' has no label");
    }
    data.scores.push_back(s);
    data.labels.push_back(it->second);
  }
  if (labels.size() != scored.size()) {
    throw Error(ErrorKind::data, "misaligned inputs: " + std::to_string(labels.size()) +
                                     " labels for " + std::to_string(scored.size()) + " scores");
  }

  const AurocResult result = auroc(data);
  OutputSink sink(cfg.output, out);
  sink.get() << json_line(json{{"auroc", result.auroc}, {"n_pos", result.n_pos},
                               {"n_neg", result.n_neg}})
             << '\n';
  sink.finish();
  return result;
}

void cmd_bench_sampling(const RunConfig& cfg, std::ostream& out) {
  validate(cfg);

  std::vector<std::pair<Index, Matrix>> datasets;
  if (!cfg.inputs.empty()) {
    datasets.emplace_back(0, Matrix());
    BatchStream stream(cfg.inputs, kScoreChunk);
    Matrix all(stream.dimension(), stream.total_vectors());
    Index col = 0;
    while (auto batch = stream.next_batch()) {
      all.middleCols(col, batch->cols()) = *batch;
      col += batch->cols();
    }
    datasets.back() = {all.cols(), std::move(all)};
  } else {
    for (Index n : cfg.bench_n) {
      datasets.emplace_back(n, synthetic::gaussian(cfg.bench_dim, n, kBenchSeed + static_cast<std::uint64_t>(n)));
    }
  }
  const std::vector<std::string> buffers =
      cfg.bench_buffers.empty() ? std::vector<std::string>{"no"} : cfg.bench_buffers;

  OutputSink sink(cfg.output, out);
  std::ostream& tsv = sink.get();
  tsv << "N\tB\tr\tpolicy\tpredicted\tmeasured\tratio_vs_batchless\tpeak_stored\tnote\n";

  for (const auto& [n, data] : datasets) {
    for (Index b : cfg.bench_batches) {
      for (const auto& rate_text : cfg.bench_rates) {
        const SamplingRate rate = SamplingRate::parse(rate_text);
        for (const auto& buffer_text : buffers) {
          const BufferPolicy policy = BufferPolicy::parse(buffer_text);
          std::vector<std::string> notes;

          IncrementalSampler sampler(IncrementalSamplerConfig{rate, b, policy});
          for (Index start = 0; start < n; start += b) {
            sampler.observe_batch(data.middleCols(start, std::min(b, n - start)));
          }
          const IncrementalResult result = sampler.flush();
          const std::uint64_t measured = result.counter.greedy_comparisons;

          const CostQuery q{n, std::min(b, n), rate};
          const std::uint64_t batchless = predict_batchless(q);
          std::string predicted = "NA";
          switch (policy.kind()) {
            case BufferPolicy::Kind::unbounded:
              predicted = std::to_string(batchless);
              break;
            case BufferPolicy::Kind::every_batch:
              if (b > n) notes.emplace_back("B exceeds N");
              else if (n % b != 0) notes.emplace_back("B does not divide N");
              else if (!rate.integral_times(b)) notes.emplace_back("r*B not integral");
              else predicted = std::to_string(predict_incremental_sum(q));
              break;
            case BufferPolicy::Kind::factor:
              notes.emplace_back("no closed form for buffered policy");
              break;
          }
          if (batchless == 0) notes.emplace_back("floor(r*N) = 0");

          std::string note;
          for (const auto& s : notes) note += (note.empty() ? "" : "; ") + s;
          tsv << n << '\t' << b << '\t' << format_double(rate.value()) << '\t' << policy.name()
              << '\t' << predicted << '\t' << measured << '\t'
              << (batchless > 0 ? format_double(static_cast<double>(measured) /
                                                static_cast<double>(batchless))
                                : std::string("NA"))
              << '\t' << result.peak_stored << '\t' << (note.empty() ? "-" : note) << '\n';
        }
      }
    }
  }
  sink.finish();
}

void cmd_info(const RunConfig& cfg, std::ostream& out) {
  validate(cfg);
  OutputSink sink(cfg.output, out);
  for (const auto& path : cfg.inputs) {
    json j;
    j["path"] = path.string();
    if (fs::is_directory(path)) {
      const MemoryBank bank = load_bank(path);
      const BankMeta& m = bank.meta();
      j["kind"] = "bank";
      j["k"] = m.k_requested;
      j["k_effective"] = bank.k_effective();
      j["m"] = m.m;
      j["precision"] = std::string(to_string(m.precision));
      j["n_b"] = m.n_b;
      j["rate"] = m.rate;
      j["buffer_policy"] = m.buffer_policy;
      j["vectors_seen"] = m.vectors_seen;
      j["bank_size"] = bank.size();
    } else {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw Error(ErrorKind::io, "cannot open '" + path.string() + "'");
      const ArrayHeader h = parse_header(in, path.string());
      j["kind"] = "npy";
      j["descr"] = std::string(descr(h.dtype));
      j["fortran_order"] = h.fortran_order;
      j["shape"] = h.shape;
      j["data_offset"] = h.data_offset;
    }
    sink.get() << json_line(j) << '\n';
  }
  sink.finish();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  configure_logging();

  CLI::App app{"streambank: streaming SVD reduction and coreset memory banks"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_inputs = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--input", cfg.inputs, "Input .npy file(s), read in order");
    if (required) opt->required();
  };
  auto add_reduction = [&](CLI::App* sub) {
    sub->add_option("--output", cfg.output, "Output directory")->required();
    sub->add_option("--k", cfg.k, "Target reduced dimension")->required();
    sub->add_option("--batch-size", cfg.batch_size, "Vectors per reduction batch (n_b)")->required();
    sub->add_option("--precision", cfg.precision, "single or double")->capture_default_str();
  };

  auto* reduce = app.add_subcommand("reduce", "Incrementally reduce feature vectors");
  add_inputs(reduce, true);
  add_reduction(reduce);

  auto* train = app.add_subcommand("train", "Reduce and sample a memory bank");
  add_inputs(train, true);
  add_reduction(train);
  train->add_option_function<std::string>("--sample-rate", [&](const std::string& v) { cfg.sample_rate = v; },
                                          "Fraction of vectors kept in the bank")->required();
  train->add_option_function<Index>("--sample-batch", [&](const Index& v) { cfg.sample_batch = v; },
                                    "Sampling batch size B (default: --batch-size)");
  train->add_flag("--incremental-sampling", cfg.incremental_sampling,
                  "Resample the bank while streaming instead of once at the end");
  train->add_option_function<std::string>("--buffer", [&](const std::string& v) { cfg.buffer = v; },
                                          "Buffering: all, no, or an integer factor");

  auto* score_cmd = app.add_subcommand("score", "Score query vectors against a bank");
  add_inputs(score_cmd, true);
  score_cmd->add_option("--bank", cfg.bank, "Bank directory")->required();
  score_cmd->add_option("--output", cfg.output, "Score TSV (default: stdout)");
  score_cmd->add_option("--groups", cfg.groups, "JSON list of {image_id, start, end} row ranges");

  auto* eval = app.add_subcommand("eval", "AUROC of a score file against labels");
  add_inputs(eval, true);
  eval->add_option("--labels", cfg.labels, "TSV of id and 0/1 label")->required();
  eval->add_option("--output", cfg.output, "Metrics JSON (default: stdout)");

  auto* bench = app.add_subcommand("bench-sampling", "Measured vs predicted sampling comparisons");
  add_inputs(bench, false);
  bench->add_option("--n", cfg.bench_n, "Synthetic dataset sizes N");
  bench->add_option("--sample-batch", cfg.bench_batches, "Sampling batch sizes B")->required();
  bench->add_option("--sample-rate", cfg.bench_rates, "Sampling rates r")->required();
  bench->add_option("--buffer", cfg.bench_buffers, "Buffer policies (default: no)");
  bench->add_option("--dim", cfg.bench_dim, "Synthetic vector dimension")->capture_default_str();
  bench->add_option("--output", cfg.output, "TSV output (default: stdout)");

  auto* info = app.add_subcommand("info", "Describe .npy files or bank directories");
  add_inputs(info, true);
  info->add_option("--output", cfg.output, "JSON lines output (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (cfg.command == "reduce") out << cmd_reduce(cfg).to_json() << '\n';
    else if (cfg.command == "train") out << cmd_train(cfg).to_json() << '\n';
    else if (cfg.command == "score") cmd_score(cfg, out);
    else if (cfg.command == "eval") cmd_eval(cfg, out);
    else if (cfg.command == "bench-sampling") cmd_bench_sampling(cfg, out);
    else if (cfg.command == "info") cmd_info(cfg, out);
  } catch (const Error& e) {
    err << "streambank " << cfg.command << ": " << to_string(e.kind()) << " error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "streambank " << cfg.command << ": io error: " << e.what() << '\n';
    return exit_code_for(ErrorKind::io);
  }
  return 0;
}

}  // namespace streambank::cli

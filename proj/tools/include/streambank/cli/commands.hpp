#pragma once

// Subcommands of the `streambank` tool. Each takes a validated RunConfig and
// writes its primary output to the configured file or the given stream.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "streambank/coreset.hpp"
#include "streambank/error.hpp"
#include "streambank/metrics.hpp"

namespace streambank::cli {

namespace fs = std::filesystem;

struct RunConfig {
  std::string command;
  std::vector<fs::path> inputs;
  fs::path output;  ///< bank/reduction directory, or TSV/JSON file; empty = stdout
  fs::path bank;    ///< bank directory for `score`
  Index k = 0;
  Index batch_size = 0;  ///< n_b
  std::optional<std::string> sample_rate;
  std::optional<Index> sample_batch;  ///< B; defaults to n_b
  bool incremental_sampling = false;
  std::optional<std::string> buffer;
  std::string precision = "double";
  fs::path groups;
  fs::path labels;

  // bench-sampling sweeps
  std::vector<Index> bench_n;
  std::vector<Index> bench_batches;
  std::vector<std::string> bench_rates;
  std::vector<std::string> bench_buffers;
  Index bench_dim = 8;
};

/// Throws one ErrorKind::config error listing every problem with `cfg`.
void validate(const RunConfig& cfg);

struct TrainSummary {
  Index vectors_seen = 0;
  Index k_effective = 0;
  Index bank_size = 0;
  ComparisonCounter counter;
  Index peak_stored = 0;

  std::string to_json() const;
};

struct ReduceSummary {
  Index vectors_seen = 0;
  Index k_effective = 0;
  Index batches = 0;
  Index stored_values = 0;

  std::string to_json() const;
};

ReduceSummary cmd_reduce(const RunConfig& cfg);
TrainSummary cmd_train(const RunConfig& cfg);
/// Writes the score TSV to cfg.output (or `out` when empty).
void cmd_score(const RunConfig& cfg, std::ostream& out);
AurocResult cmd_eval(const RunConfig& cfg, std::ostream& out);
void cmd_bench_sampling(const RunConfig& cfg, std::ostream& out);
void cmd_info(const RunConfig& cfg, std::ostream& out);

/// 0 success, 2 config, 3 data/format, 4 numerical.
int exit_code_for(ErrorKind kind) noexcept;

/// Parse argv, dispatch, and map failures onto exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Shortest decimal that round-trips `v`.
std::string format_double(double v);

/// Path of the per-image score table written next to a score TSV.
fs::path image_scores_path(const fs::path& score_tsv);

}  // namespace streambank::cli

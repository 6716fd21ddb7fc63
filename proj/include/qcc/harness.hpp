#pragma once

// Experiment orchestration behind the qcclab command line.
//
// Every command turns an ExperimentConfig into a ResultTable. Rows hold typed
// cells so the CSV and JSON writers can format numbers identically on every
// run; wall time is only recorded when asked for, since it would otherwise
// break byte-identical output.

#include "qcc/algorithm.hpp"
#include "qcc/padded.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qcc {

enum class Command {
  QccRun,
  QccSweep,
  ClassicalRun,
  ClassicalT3,
  ClassicalGuess,
  PaddedVerify,
  PaddedWeights,
  BoundsEval,
};

const char* to_string(Command c);

enum class OutputFormat { Csv, Json };

struct SampleRange {
  long lo = 0;
  long hi = 0;
  long step = 1;

  /// Parses "LO:HI" or "LO:HI:STEP" (ConfigError otherwise).
  static SampleRange parse(const std::string& text);
  std::vector<long> points() const;
};

/// Test-only faults for exercising the violation paths.
enum class Fault { None, FlipBlockCount };

struct ExperimentConfig {
  Command command = Command::QccRun;
  std::optional<int> n;
  std::optional<int> k;
  std::optional<int> l;
  std::optional<long> t;
  int p = 2;
  double delta = 0.1;
  long trials = 1;
  std::uint64_t seed = 0;
  std::optional<long> samples_override;
  std::optional<SampleRange> range;
  std::string output_path;  // empty: stdout
  std::string trajectory_path;
  OutputFormat format = OutputFormat::Csv;
  unsigned threads = 1;
  bool timing = false;
  Engine engine = Engine::Categorical;
  PaddedGrid grid;
  std::vector<int> guess_m{1, 2};
  Fault fault = Fault::None;

  /// Checks the domains the command needs; throws ConfigError naming the first violation.
  void validate() const;
};

using Cell = std::variant<std::monostate, long long, double, std::string>;

struct ResultTable {
  std::string experiment;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> warnings;
  /// Human-readable descriptions of failed checks.
  std::vector<std::string> witnesses;

  void add_row(std::vector<Cell> row);
  const Cell& at(std::size_t row, const std::string& column) const;
  double number(std::size_t row, const std::string& column) const;
  bool violated() const { return !witnesses.empty(); }
};

/// 17 significant digits, round-trippable.
std::string format_double(double x);
std::string format_cell(const Cell& c);

void write_csv(const ResultTable& table, std::ostream& out);
void write_json(const ResultTable& table, std::ostream& out);

/// Aggregate success over `trials` seeded runs of the learner, one row.
/// Per-trial trajectories go to config.trajectory_path when set.
ResultTable run_qcc(const ExperimentConfig& config);

/// Success curve over config.range, computed from shared trial prefixes.
ResultTable sweep(const ExperimentConfig& config);

/// Classical collection with at most l misses allowed.
ResultTable run_classical(const ExperimentConfig& config);

/// Collect-then-guess task: Monte Carlo, exact, and the padded T2 value.
ResultTable run_t3(const ExperimentConfig& config);

/// Exact guessing probabilities for l in [10m, 20m].
ResultTable run_guess(const ExperimentConfig& config);

/// Exhaustive padded checks over config.grid.
ResultTable verify_padded(const ExperimentConfig& config);

/// Block table for S = {0, ..., k-1}.
ResultTable padded_weights(const ExperimentConfig& config);

/// Upper and lower bound values for (n, k, delta) and friends.
ResultTable bounds_eval(const ExperimentConfig& config);

/// Validates, dispatches on config.command, and stamps wall time when requested.
ResultTable run_experiment(const ExperimentConfig& config);

}  // namespace qcc

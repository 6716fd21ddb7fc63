// qcclab: command-line driver for the coupon collector experiments.
//
// Exit codes: 0 when every check passes, 1 on a check violation, 2 on a
// configuration error.

#include "qcc/errors.hpp"
#include "qcc/harness.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <map>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;

bool is_config_error(qcc::ErrorCode code) {
  switch (code) {
    case qcc::ErrorCode::ConfigError:
    case qcc::ErrorCode::DomainError:
    case qcc::ErrorCode::DeltaOutOfRange:
    case qcc::ErrorCode::RegimeViolation:
    case qcc::ErrorCode::BudgetExceeded:
    case qcc::ErrorCode::OutOfRange:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum coupon collector experiments"};
  app.set_config("--config", "", "Read options from a TOML/INI file; flags on the command line win");
  app.require_subcommand(1);
  app.fallthrough();

  qcc::ExperimentConfig config;
  std::optional<int> n;
  std::optional<int> k;
  std::optional<int> l;
  std::optional<long> t;
  std::optional<long> samples;
  std::string range;
  std::string format = "csv";
  std::string engine = "categorical";
  std::string fault = "none";
  int grid_n = config.grid.max_n;
  int grid_k = config.grid.max_k;
  int grid_t = config.grid.max_t;
  std::vector<int> grid_p = config.grid.p_values;
  bool grid_p_empty = false;

  app.add_option("--n", n, "Ground set size");
  app.add_option("--k", k, "Hidden set size");
  app.add_option("--l", l, "Allowed mismatches");
  app.add_option("--t", t, "Number of samples for padded and T3 commands");
  app.add_option("--p", config.p, "Pad modulus")->capture_default_str();
  app.add_option("--delta", config.delta, "Failure probability")->capture_default_str();
  app.add_option("--trials", config.trials, "Monte Carlo trials")->capture_default_str();
  app.add_option("--seed", config.seed, "Base seed")->capture_default_str();
  app.add_option("--samples", samples, "Override the sample budget");
  app.add_option("--range", range, "Sample range LO:HI[:STEP] for sweeps");
  app.add_option("--out", config.output_path, "Output file (default stdout)");
  app.add_option("--trajectory", config.trajectory_path, "Per-trial walk CSV for qcc run");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--threads", config.threads, "Worker threads")->capture_default_str();
  app.add_option("--engine", engine, "categorical or statevec")
      ->check(CLI::IsMember({"categorical", "statevec"}))
      ->capture_default_str();
  app.add_option("--grid-n", grid_n, "Largest n of the padded grid")->capture_default_str();
  app.add_option("--grid-k", grid_k, "Largest k of the padded grid")->capture_default_str();
  app.add_option("--grid-t", grid_t, "Largest t of the padded grid")->capture_default_str();
  app.add_option("--grid-p", grid_p, "Pad moduli of the padded grid")->delimiter(',')->capture_default_str();
  app.add_flag("--no-grid-p", grid_p_empty, "Use an empty list of pad moduli");
  app.add_option("--guess-m", config.guess_m, "m values for the guessing grid")->delimiter(',');
  app.add_flag("--timing", config.timing, "Add a wall_seconds column (output is then not reproducible)");
  app.add_option("--inject-fault", fault, "Test-only fault injection")
      ->check(CLI::IsMember({"none", "flip-block-count"}))
      ->group("");

  std::map<CLI::App*, qcc::Command> commands;
  auto* qcc_cmd = app.add_subcommand("qcc", "Quantum learner")->require_subcommand(1);
  commands[qcc_cmd->add_subcommand("run", "Aggregate success of the learner")] = qcc::Command::QccRun;
  commands[qcc_cmd->add_subcommand("sweep", "Success curve over a sample range")] = qcc::Command::QccSweep;
  auto* classical_cmd = app.add_subcommand("classical", "Classical baselines")->require_subcommand(1);
  commands[classical_cmd->add_subcommand("run", "Classical coupon collection")] = qcc::Command::ClassicalRun;
  commands[classical_cmd->add_subcommand("t3", "Collect-then-guess task")] = qcc::Command::ClassicalT3;
  commands[classical_cmd->add_subcommand("guess", "Exact guessing probabilities")] = qcc::Command::ClassicalGuess;
  auto* padded_cmd = app.add_subcommand("padded", "Padded ensembles")->require_subcommand(1);
  commands[padded_cmd->add_subcommand("verify", "Exhaustive identity and fidelity checks")] =
      qcc::Command::PaddedVerify;
  commands[padded_cmd->add_subcommand("weights", "Block table for one configuration")] = qcc::Command::PaddedWeights;
  auto* bounds_cmd = app.add_subcommand("bounds", "Analytic bounds")->require_subcommand(1);
  commands[bounds_cmd->add_subcommand("eval", "Evaluate upper and lower bounds")] = qcc::Command::BoundsEval;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    for (const auto& [sub, command] : commands) {
      if (sub->parsed()) config.command = command;
    }
    config.n = n;
    config.k = k;
    config.l = l;
    config.t = t;
    config.samples_override = samples;
    if (!range.empty()) config.range = qcc::SampleRange::parse(range);
    config.format = format == "json" ? qcc::OutputFormat::Json : qcc::OutputFormat::Csv;
    config.engine = engine == "statevec" ? qcc::Engine::StateVector : qcc::Engine::Categorical;
    config.fault = fault == "flip-block-count" ? qcc::Fault::FlipBlockCount : qcc::Fault::None;
    config.grid = {grid_n, grid_k, grid_t, grid_p_empty ? std::vector<int>{} : grid_p};

    const qcc::ResultTable table = qcc::run_experiment(config);
    for (const auto& w : table.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& w : table.witnesses) std::cerr << "violation: " << w << '\n';

    std::ofstream file;
    if (!config.output_path.empty()) {
      file.open(config.output_path);
      if (!file) {
        std::cerr << "error: cannot open " << config.output_path << '\n';
        return kExitConfig;
      }
    }
    std::ostream& out = config.output_path.empty() ? std::cout : file;
    if (config.format == qcc::OutputFormat::Json) {
      qcc::write_json(table, out);
    } else {
      qcc::write_csv(table, out);
    }
    return table.violated() ? kExitViolation : kExitOk;
  } catch (const qcc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_config_error(e.code()) ? kExitConfig : kExitViolation;
  }
}

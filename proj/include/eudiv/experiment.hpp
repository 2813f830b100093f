#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eudiv/divergence.hpp"

namespace eudiv {

// Experiment description shared by every CLI subcommand. All fields have
// working defaults; a JSON config file may override any subset. Unknown
// fields and malformed values are reported with their field names.
struct ExperimentConfig {
  Nat k = nat(2);
  Evidence evidence = {{Nat(0), Nat(0)}, {Nat(1), Nat(1)}};

  std::string utility_label = "UNBOUNDED_ID";
  Rat utility_scale = Rat(1);
  Rat utility_offset = Rat(0);

  std::uint64_t n_max = 10000;  // dense index sweeps (enumerate, sums)
  std::uint64_t j_max = 50;     // witness positions
  std::uint64_t bb_x_max = 200;

  std::uint64_t step_budget = 1000000;    // table rows
  std::uint64_t eval_budget = 1000000;    // synthesis + verification runs
  std::uint64_t search_budget = 1000000;  // utility inversion scan

  std::uint64_t min_passing = 3;
  std::vector<std::uint64_t> checkpoints = {100, 1000, 10000};

  std::uint64_t fixed_a = 1;  // fixed-point target F(x) = a*x + b
  std::uint64_t fixed_b = 7;
  std::uint64_t fixedpoint_search_cap = 5000;

  std::string out_dir = "out";

  UtilitySpec utility() const;

  // Enforces the config invariants: positive budgets, a well-formed utility,
  // and evidence that does not constrain the distinguished input k. Throws
  // ConfigError naming the offending field.
  void validate() const;

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
};

// Command drivers. Each writes its artifacts under config.out_dir (created
// on demand) with stable, replayable bytes, and returns the computed data
// for in-process consumers. run_log.txt accumulates one line per command
// and is the only file whose content is append-only rather than replayed.

// eval_table.csv + table_meta.json
EvalTable cmd_enumerate(const ExperimentConfig& config);

// bb.csv + crossings.csv
struct BusyBeaverResult {
  std::vector<BBRecord> records;
  std::vector<std::uint64_t> identity_crossings;  // bound exceeds x
  std::vector<std::uint64_t> zero_crossings;      // bound exceeds 0
  bool ok = false;  // both comparison programs are overtaken
};
BusyBeaverResult cmd_busybeaver(const ExperimentConfig& config);

// certificates.json + certificates.csv
struct WitnessResult {
  std::vector<WitnessAttempt> attempts;
  std::vector<Nat> q_values;  // over the certified dense prefix of positions
  std::uint64_t passing = 0;
  bool ok = false;  // passing >= config.min_passing
};
WitnessResult cmd_witness(const ExperimentConfig& config);

// partial_sums.csv + convergence.json (bounded utilities only)
struct SumsResult {
  PartialSumTrace trace;
  std::optional<ConvergenceReport> report;
};
SumsResult cmd_sums(const ExperimentConfig& config);

// fixedpoint.json
struct FixedPointResult {
  bool found = false;
  Nat p;
  Program program;  // decode(p) when found
  std::vector<std::pair<Nat, EvalOutcome>> probes;
  bool verified = false;  // probes match the transformed program
  std::string error;      // set when not found
};
FixedPointResult cmd_fixedpoint(const ExperimentConfig& config);

}  // namespace eudiv

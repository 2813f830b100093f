// Command-line driver: each subcommand runs one pipeline stage of the exact
// prior-weighted expected-utility experiments and writes replayable CSV/JSON
// artifacts. Exit codes: 0 success (and, where applicable, property holds),
// 1 runtime error, 2 config error, 3 too few passing certificates,
// 4 no verified fixed point, 5 no busy-beaver crossing.

#include <CLI11.hpp>
#include <iostream>

#include "eudiv/errors.hpp"
#include "eudiv/experiment.hpp"

namespace {

std::string plural(std::uint64_t n, const char* word) {
  std::string out = std::to_string(n) + " " + word;
  if (n != 1) out += 's';
  return out;
}

std::string indices(std::uint64_t n) {
  return std::to_string(n) + (n == 1 ? " index" : " indices");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact experiments over a two-instruction register machine: dovetail "
      "evaluation, busy-beaver lower bounds, evidence-matching program "
      "synthesis, divergence witness certificates, and prior-weighted "
      "partial sums"};
  app.require_subcommand(1);
  app.fallthrough();  // --config/--out may follow the subcommand name

  std::string config_path;
  std::string out_dir;
  app.add_option("--config", config_path, "JSON experiment config file")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "artifact directory (overrides config)");

  std::uint64_t n_max = 0, step_budget = 0, x_max = 0, j_max = 0;
  std::uint64_t min_passing = 0, fixed_a = 0, fixed_b = 0, search_cap = 0;

  CLI::App* c_enum = app.add_subcommand(
      "enumerate", "evaluate program indices 0..n_max on input k");
  CLI::Option* o_en_nmax =
      c_enum->add_option("--n-max", n_max, "largest index to evaluate");
  CLI::Option* o_en_budget =
      c_enum->add_option("--step-budget", step_budget, "steps per run");

  CLI::App* c_bb = app.add_subcommand(
      "busybeaver",
      "largest halting value per prefix, compared against identity and "
      "constant-zero");
  CLI::Option* o_bb_xmax =
      c_bb->add_option("--x-max", x_max, "largest prefix bound probed");

  CLI::App* c_wit = app.add_subcommand(
      "witness",
      "synthesize and certify non-vanishing prior-weighted utility terms");
  CLI::Option* o_wit_jmax =
      c_wit->add_option("--j-max", j_max, "last witness position");
  CLI::Option* o_wit_min = c_wit->add_option(
      "--min-passing", min_passing, "passing certificates required for exit 0");

  CLI::App* c_sums = app.add_subcommand(
      "sums", "exact prior-weighted partial sums over evidence-consistent "
              "programs, with tail bounds for bounded utilities");
  CLI::Option* o_sums_nmax =
      c_sums->add_option("--n-max", n_max, "largest index summed");

  CLI::App* c_fix = app.add_subcommand(
      "fixedpoint",
      "index p whose program computes a*p+b on every input, found by "
      "iteration plus bounded search");
  CLI::Option* o_fix_a = c_fix->add_option("--a", fixed_a, "coefficient a");
  CLI::Option* o_fix_b = c_fix->add_option("--b", fixed_b, "constant b");
  CLI::Option* o_fix_cap =
      c_fix->add_option("--search-cap", search_cap, "largest index scanned");

  CLI11_PARSE(app, argc, argv);

  try {
    eudiv::ExperimentConfig config;
    if (!config_path.empty()) {
      config = eudiv::ExperimentConfig::from_json_file(config_path);
    }
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (o_en_nmax->count() || o_sums_nmax->count()) config.n_max = n_max;
    if (o_en_budget->count()) config.step_budget = step_budget;
    if (o_bb_xmax->count()) config.bb_x_max = x_max;
    if (o_wit_jmax->count()) config.j_max = j_max;
    if (o_wit_min->count()) config.min_passing = min_passing;
    if (o_fix_a->count()) config.fixed_a = fixed_a;
    if (o_fix_b->count()) config.fixed_b = fixed_b;
    if (o_fix_cap->count()) config.fixedpoint_search_cap = search_cap;

    if (*c_enum) {
      eudiv::EvalTable table = eudiv::cmd_enumerate(config);
      std::uint64_t halted = 0;
      for (const auto& row : table.rows) halted += row.halted() ? 1 : 0;
      std::cout << "evaluated " << indices(table.rows.size()) << " ("
                << halted << " halted) -> " << config.out_dir
                << "/eval_table.csv\n";
      return 0;
    }
    if (*c_bb) {
      eudiv::BusyBeaverResult r = eudiv::cmd_busybeaver(config);
      std::cout << "bound overtakes identity at "
                << plural(r.identity_crossings.size(), "input")
                << ", constant-zero at "
                << plural(r.zero_crossings.size(), "input") << " (x <= "
                << config.bb_x_max << ") -> " << config.out_dir << "/bb.csv\n";
      return r.ok ? 0 : 5;
    }
    if (*c_wit) {
      eudiv::WitnessResult r = eudiv::cmd_witness(config);
      std::cout << r.passing << " of "
                << plural(r.attempts.size(), "certificate") << " pass (need "
                << config.min_passing << ") -> " << config.out_dir
                << "/certificates.json\n";
      return r.ok ? 0 : 3;
    }
    if (*c_sums) {
      eudiv::SumsResult r = eudiv::cmd_sums(config);
      std::cout << "final sum " << eudiv::rat_string(r.trace.final_sum)
                << " over " << indices(r.trace.rows.size())
                << " (skipped: " << r.trace.skipped_not_halted
                << " not halted, " << r.trace.skipped_contradicted
                << " contradicted, " << r.trace.skipped_undecided
                << " undecided)";
      if (r.report) {
        std::cout << "; " << plural(r.report->checkpoints.size(), "checkpoint")
                  << " within tail bounds";
      } else {
        std::cout << "; unbounded utility: divergence is exhibited by "
                     "witness certificates, not by this prefix";
      }
      std::cout << " -> " << config.out_dir << "/partial_sums.csv\n";
      return 0;
    }
    if (*c_fix) {
      eudiv::FixedPointResult r = eudiv::cmd_fixedpoint(config);
      if (r.found) {
        eudiv::Nat fp = eudiv::nat(config.fixed_a) * r.p +
                        eudiv::nat(config.fixed_b);
        std::cout << "fixed point p = " << r.p.get_str() << ", program of "
                  << plural(r.program.size(), "instruction")
                  << " computes a*p+b = " << fp.get_str() << " on every probe"
                  << (r.verified ? "" : " (PROBE MISMATCH)") << " -> "
                  << config.out_dir << "/fixedpoint.json\n";
      } else {
        std::cout << "no fixed point: " << r.error << "\n";
      }
      return r.found && r.verified ? 0 : 4;
    }
  } catch (const eudiv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

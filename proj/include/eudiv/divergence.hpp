#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eudiv/dovetail.hpp"
#include "eudiv/priors.hpp"
#include "eudiv/synthesis.hpp"

namespace eudiv {

// One fully materialized term of the lower-bound series: at position j, the
// least table index u_j attaining the busy-beaver bound, the synthesized
// index g whose program matches the evidence and reaches utility at least
// b_value on input k, and the exact weighted magnitude of that term.
struct WitnessCertificate {
  std::uint64_t j = 0;
  std::uint64_t u_j = 0;
  Nat b_value;         // value computed by program u_j on input k
  Nat g_index;         // index of the synthesized evidence-matching program
  Nat output;          // value computed by program g_index on input k
  Rat prior_bound;     // prior weight of g_index
  Rat term_magnitude;  // prior_bound * |utility(output)|
  bool passes = false;  // term_magnitude >= 1
};

struct WitnessAttempt {
  std::uint64_t j = 0;
  std::optional<WitnessCertificate> certificate;
  std::string failure;  // reason the certificate is absent
};

// Builds one attempt per position j in 0..j_max. Failures (no halting index,
// synthesis budget exhaustion, a broken utility chain) are recorded per
// position instead of aborting the sequence.
std::vector<WitnessAttempt> witness_sequence(const EvalTable& table,
                                             const Evidence& evidence,
                                             const UtilitySpec& utility,
                                             std::uint64_t j_max,
                                             std::uint64_t eval_budget,
                                             std::uint64_t search_budget);

// Re-derives every field of the certificate from raw program execution and
// exact arithmetic: both runs are replayed, evidence consistency and the
// utility chain |utility(output)| >= |utility_lb(output)| >= b_value are
// re-checked, and the prior/term values are recomputed. Any mismatch throws
// InconsistentCertificate. Returns the (re-verified) passes flag.
bool certify_term(const WitnessCertificate& cert, const Evidence& evidence,
                  const Nat& k, const UtilitySpec& utility,
                  std::uint64_t eval_budget);

enum class SkipReason { none, not_halted, evidence_contradicted,
                        evidence_undecided };

struct SumRow {
  Nat n;
  Rat prior;
  SkipReason skip = SkipReason::none;
  Nat value;        // meaningful only when skip == none
  Rat term;         // prior * utility(value), zero when skipped
  Rat running_sum;  // exact sum of terms through this row
};

struct PartialSumTrace {
  Nat k;
  std::string utility_label;
  std::uint64_t budget = 0;
  std::vector<SumRow> rows;
  Rat final_sum;
  std::uint64_t skipped_not_halted = 0;
  std::uint64_t skipped_contradicted = 0;
  std::uint64_t skipped_undecided = 0;

  friend bool operator==(const PartialSumTrace& a, const PartialSumTrace& b);
};

bool operator==(const SumRow& a, const SumRow& b);

// Exact partial sums of prior-weighted utilities over program indices
// 0..n_max, counting only rows that halt on k within budget and whose
// programs are consistent with the evidence. Row terms are computed on an
// OpenMP worklist (slot writes only); the running sums are accumulated in a
// deterministic serial pass, so the result is identical to the serial
// variant bit for bit.
PartialSumTrace partial_sums(const Evidence& evidence, const Nat& k,
                             const UtilitySpec& utility, std::uint64_t n_max,
                             std::uint64_t budget);
PartialSumTrace partial_sums_serial(const Evidence& evidence, const Nat& k,
                                    const UtilitySpec& utility,
                                    std::uint64_t n_max, std::uint64_t budget);

// Same accounting over an explicit index list (for spot-checking specific
// indices, e.g. synthesized witnesses, without a dense sweep).
PartialSumTrace partial_sums_over_indices(const Evidence& evidence,
                                          const Nat& k,
                                          const UtilitySpec& utility,
                                          std::span<const Nat> indices,
                                          std::uint64_t budget);

// Tail-bound audit for bounded utilities: at each checkpoint N the observed
// later movement of the partial sums must stay within sup|utility| times the
// exact prior mass of indices above N.
struct ConvergenceCheckpoint {
  std::uint64_t N = 0;
  Rat sum_at;
  Rat increment_to_next;  // |sum at next checkpoint (or end) - sum_at|
  Rat increment_to_end;   // |final sum - sum_at|
  Rat tail_mass;          // exact prior mass of indices > N
  Rat bound;              // sup|utility| * tail_mass
  bool ok = false;
};

struct ConvergenceReport {
  std::string utility_label;
  Rat sup_abs;
  std::vector<ConvergenceCheckpoint> checkpoints;
  bool all_ok = true;
};

// Requires a bounded utility (ConfigError) and a dense prefix trace whose
// row n is index n (Error). Checkpoints must lie inside the trace
// (ConfigError). An empty trace yields a trivially passing empty report.
// A violated bound throws BoundViolated.
ConvergenceReport convergence_report(
    const PartialSumTrace& trace, const UtilitySpec& utility,
    std::span<const std::uint64_t> checkpoints);

}  // namespace eudiv

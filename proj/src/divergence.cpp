#include "eudiv/divergence.hpp"

#include <algorithm>
#include <omp.h>

#include "eudiv/errors.hpp"

namespace eudiv {

std::vector<WitnessAttempt> witness_sequence(const EvalTable& table,
                                             const Evidence& evidence,
                                             const UtilitySpec& utility,
                                             std::uint64_t j_max,
                                             std::uint64_t eval_budget,
                                             std::uint64_t search_budget) {
  if (j_max > table.n_max()) {
    throw Error("witness_sequence: j_max exceeds table range");
  }
  std::vector<WitnessAttempt> attempts;
  attempts.reserve(j_max + 1);
  for (std::uint64_t j = 0; j <= j_max; ++j) {
    WitnessAttempt attempt;
    attempt.j = j;
    try {
      BBRecord rec = busy_beaver_lb(table, j);

      WitnessCertificate cert;
      cert.j = j;
      cert.u_j = rec.argmax_index;
      cert.b_value = rec.value;
      cert.g_index = synthesize_G(nat(cert.u_j), evidence, table.k, utility,
                                  eval_budget, search_budget);

      Program g_prog = decode(cert.g_index);
      if (check_evidence(g_prog, evidence, eval_budget) !=
          EvidenceCheck::consistent) {
        throw Error("synthesized program is not evidence-consistent");
      }
      EvalOutcome out = run(g_prog, table.k, eval_budget);
      if (!out.halted()) {
        throw Error("synthesized program did not halt on k within budget");
      }
      cert.output = out.value;

      // The chain that makes the term a genuine lower-bound contribution:
      // |utility(output)| >= |utility_lb(output)| >= b_value.
      Rat lb = abs(utility.utility_lb(cert.output));
      Rat full = abs(utility.utility(cert.output));
      if (full < lb || lb < cert.b_value) {
        throw Error("utility chain violated on synthesized output");
      }

      cert.prior_bound = prior_lb(cert.g_index);
      cert.term_magnitude = cert.prior_bound * full;
      cert.term_magnitude.canonicalize();
      cert.passes = cert.term_magnitude >= 1;
      attempt.certificate = std::move(cert);
    } catch (const std::exception& e) {
      attempt.failure = e.what();
    }
    attempts.push_back(std::move(attempt));
  }
  return attempts;
}

bool certify_term(const WitnessCertificate& cert, const Evidence& evidence,
                  const Nat& k, const UtilitySpec& utility,
                  std::uint64_t eval_budget) {
  auto fail = [&](const std::string& why) {
    throw InconsistentCertificate("certify_term[j=" + std::to_string(cert.j) +
                                  "]: " + why);
  };

  if (cert.u_j > cert.j) fail("bound index exceeds its position");

  EvalOutcome src = run(decode(nat(cert.u_j)), k, eval_budget);
  if (!src.halted()) fail("bound program did not halt on k");
  if (src.value != cert.b_value) fail("recorded b_value does not match rerun");

  Program g_prog = decode(cert.g_index);
  if (check_evidence(g_prog, evidence, eval_budget) !=
      EvidenceCheck::consistent) {
    fail("synthesized program is not evidence-consistent");
  }
  EvalOutcome out = run(g_prog, k, eval_budget);
  if (!out.halted()) fail("synthesized program did not halt on k");
  if (out.value != cert.output) fail("recorded output does not match rerun");

  Rat lb = abs(utility.utility_lb(cert.output));
  Rat full = abs(utility.utility(cert.output));
  if (full < lb || lb < cert.b_value) fail("utility chain violated");

  if (prior_lb(cert.g_index) != cert.prior_bound) fail("prior bound mismatch");
  Rat term = cert.prior_bound * full;
  term.canonicalize();
  if (term != cert.term_magnitude) fail("term magnitude mismatch");
  if (cert.passes != (term >= 1)) fail("passes flag mismatch");
  return cert.passes;
}

bool operator==(const SumRow& a, const SumRow& b) {
  return a.n == b.n && a.prior == b.prior && a.skip == b.skip &&
         a.value == b.value && a.term == b.term &&
         a.running_sum == b.running_sum;
}

bool operator==(const PartialSumTrace& a, const PartialSumTrace& b) {
  return a.k == b.k && a.utility_label == b.utility_label &&
         a.budget == b.budget && a.rows == b.rows &&
         a.final_sum == b.final_sum &&
         a.skipped_not_halted == b.skipped_not_halted &&
         a.skipped_contradicted == b.skipped_contradicted &&
         a.skipped_undecided == b.skipped_undecided;
}

namespace {

PartialSumTrace partial_sums_impl(const Evidence& evidence, const Nat& k,
                                  const UtilitySpec& utility,
                                  std::span<const Nat> indices,
                                  std::uint64_t budget, bool parallel) {
  PartialSumTrace trace;
  trace.k = k;
  trace.utility_label = utility.label;
  trace.budget = budget;
  trace.rows.resize(indices.size());

  const std::int64_t count = static_cast<std::int64_t>(indices.size());
#pragma omp parallel for schedule(dynamic, 64) if (parallel)
  for (std::int64_t i = 0; i < count; ++i) {
    const Nat& n = indices[static_cast<std::size_t>(i)];
    SumRow row;
    row.n = n;
    row.prior = prior_lb(n);
    row.term = Rat(0);
    Program prog = decode(n);
    EvalOutcome out = run(prog, k, budget);
    if (!out.halted()) {
      row.skip = SkipReason::not_halted;
    } else {
      switch (check_evidence(prog, evidence, budget)) {
        case EvidenceCheck::contradicted:
          row.skip = SkipReason::evidence_contradicted;
          break;
        case EvidenceCheck::undecided:
          row.skip = SkipReason::evidence_undecided;
          break;
        case EvidenceCheck::consistent:
          row.value = out.value;
          row.term = row.prior * utility.utility(row.value);
          row.term.canonicalize();
          break;
      }
    }
    trace.rows[static_cast<std::size_t>(i)] = std::move(row);
  }

  // Deterministic accumulation, independent of worklist scheduling.
  Rat sum(0);
  for (SumRow& row : trace.rows) {
    switch (row.skip) {
      case SkipReason::not_halted: ++trace.skipped_not_halted; break;
      case SkipReason::evidence_contradicted:
        ++trace.skipped_contradicted;
        break;
      case SkipReason::evidence_undecided: ++trace.skipped_undecided; break;
      case SkipReason::none: sum += row.term; break;
    }
    sum.canonicalize();
    row.running_sum = sum;
  }
  trace.final_sum = sum;
  return trace;
}

std::vector<Nat> dense_indices(std::uint64_t n_max) {
  std::vector<Nat> indices;
  indices.reserve(n_max + 1);
  for (std::uint64_t n = 0; n <= n_max; ++n) indices.push_back(nat(n));
  return indices;
}

}  // namespace

PartialSumTrace partial_sums(const Evidence& evidence, const Nat& k,
                             const UtilitySpec& utility, std::uint64_t n_max,
                             std::uint64_t budget) {
  return partial_sums_impl(evidence, k, utility, dense_indices(n_max), budget,
                           true);
}

PartialSumTrace partial_sums_serial(const Evidence& evidence, const Nat& k,
                                    const UtilitySpec& utility,
                                    std::uint64_t n_max,
                                    std::uint64_t budget) {
  return partial_sums_impl(evidence, k, utility, dense_indices(n_max), budget,
                           false);
}

PartialSumTrace partial_sums_over_indices(const Evidence& evidence,
                                          const Nat& k,
                                          const UtilitySpec& utility,
                                          std::span<const Nat> indices,
                                          std::uint64_t budget) {
  return partial_sums_impl(evidence, k, utility, indices, budget, true);
}

ConvergenceReport convergence_report(
    const PartialSumTrace& trace, const UtilitySpec& utility,
    std::span<const std::uint64_t> checkpoints) {
  if (!utility.bounded) {
    throw ConfigError(
        "convergence_report: tail bounds require a bounded utility");
  }
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    if (trace.rows[i].n != nat(i)) {
      throw Error("convergence_report: trace is not a dense index prefix");
    }
  }

  ConvergenceReport report;
  report.utility_label = utility.label;
  report.sup_abs = utility.sup_abs;
  if (trace.rows.empty()) return report;  // trivially passing

  std::vector<std::uint64_t> points(checkpoints.begin(), checkpoints.end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  for (std::uint64_t N : points) {
    if (N >= trace.rows.size()) {
      throw ConfigError("convergence_report: checkpoint " + std::to_string(N) +
                        " is outside the trace");
    }
  }

  for (std::size_t i = 0; i < points.size(); ++i) {
    ConvergenceCheckpoint cp;
    cp.N = points[i];
    cp.sum_at = trace.rows[cp.N].running_sum;
    const Rat& next_sum = i + 1 < points.size()
                              ? trace.rows[points[i + 1]].running_sum
                              : trace.final_sum;
    cp.increment_to_next = abs(next_sum - cp.sum_at);
    cp.increment_to_end = abs(trace.final_sum - cp.sum_at);
    cp.tail_mass = prior_tail_mass(nat(cp.N) + 1);
    cp.bound = report.sup_abs * cp.tail_mass;
    cp.bound.canonicalize();
    // Sound because every row above N contributes at most
    // sup|utility| * prior(n), and skipped rows contribute nothing.
    cp.ok = cp.increment_to_next <= cp.bound && cp.increment_to_end <= cp.bound;
    if (!cp.ok) {
      throw BoundViolated("convergence_report: movement after checkpoint " +
                          std::to_string(cp.N) + " exceeds " +
                          rat_string(cp.bound));
    }
    report.checkpoints.push_back(std::move(cp));
  }
  report.all_ok = true;
  return report;
}

}  // namespace eudiv

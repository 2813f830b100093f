#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>

#include "eudiv/machine.hpp"
#include "eudiv/priors.hpp"

namespace eudiv {

// Finite input/output constraints a program must reproduce exactly.
using Evidence = std::map<Nat, Nat>;

enum class EvidenceCheck {
  consistent,    // every evidence input halts with the required value
  contradicted,  // some evidence input halts with a different value
  undecided,     // no contradiction, but some evidence input exceeds budget
};

EvidenceCheck check_evidence(const Program& p, const Evidence& evidence,
                             std::uint64_t budget);

// Builds a program computing the finite table: evidence inputs map to their
// recorded values, everything else maps to default_value. The construction
// keeps a dedicated scratch register (always zero) for unconditional jumps
// and self-verifies on the evidence inputs plus fresh probe inputs before
// returning. Throws Error if the table would exceed the size cap.
Program synthesize_table_program(const Evidence& evidence,
                                 const Nat& default_value);

// Index of a program that matches the evidence and, on the distinguished
// input k, outputs the least y whose utility magnitude reaches the value
// computed by program n on k. Throws SourceNotHaltedWithinBudget if program
// n does not halt on k, SearchBudgetExceeded from the utility inversion, and
// ConfigError if k is itself an evidence input.
Nat synthesize_G(const Nat& n, const Evidence& evidence, const Nat& k,
                 const UtilitySpec& utility, std::uint64_t eval_budget,
                 std::uint64_t search_budget);

// Least-effort fixed point of a program transformer: first iterates
// p -> encode(transformer(p)) looking for a syntactic fixed point (orbits
// whose programs outgrow the size cap abandon this phase), then scans
// indices 0..search_cap for probe-equivalence with the transformed program
// (outcomes compared under probe_budget, including both-exceeded). The
// transformer must be total on indices up to search_cap. Throws
// FixedPointNotFound when both phases come up empty.
Nat fixed_point(const std::function<Program(const Nat&)>& transformer,
                std::span<const Nat> probes, std::uint64_t probe_budget,
                std::uint64_t search_cap);

}  // namespace eudiv

#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "eudiv/numbers.hpp"

namespace eudiv {

// Dyadic length-weighted prior lower bound over program indices:
//
//   prior_lb(n) = 2^-(2b+2)  with  b = floor(log2(n+1)).
//
// Every index gets positive weight, each dyadic block [2^b-1, 2^(b+1)-1)
// contributes 2^-(b+2), and the total mass is exactly 1/2.
Rat prior_lb(const Nat& n);

// Closed-form partial mass sum_{n < N} prior_lb(n).
Rat prior_partial_sum(const Nat& N);

// Exact remaining mass sum_{n >= N} prior_lb(n); partial + tail == 1/2.
Rat prior_tail_mass(const Nat& N);

// Simple dominating bound 2^-(b+1) >= prior_tail_mass(N), b = floor(log2(N+1)).
Rat prior_tail_bound(const Nat& N);

// Utility functions over outputs. Two base families plus exact affine
// reweightings of either:
//
//   UNBOUNDED_ID   U(y) = y                  (unbounded)
//   BOUNDED_SAT    U(y) = 1 - 1/(y+1)        (bounded, values in [0,1))
//
// The computable lower bound utility_lb coincides with utility for both
// families (and stays coincident under affine maps), which keeps the
// |utility_lb| <= |utility| requirement trivially tight.
enum class UtilityBase { unbounded_id, bounded_sat };

struct UtilitySpec {
  std::string label;
  UtilityBase base = UtilityBase::unbounded_id;
  Rat scale = Rat(1);
  Rat offset = Rat(0);
  bool bounded = false;
  Rat sup_abs = Rat(0);  // valid only when bounded

  Rat utility(const Nat& y) const;
  Rat utility_lb(const Nat& y) const;
};

// label is "UNBOUNDED_ID" or "BOUNDED_SAT"; throws ConfigError otherwise.
UtilitySpec make_utility(const std::string& label, const Rat& scale = Rat(1),
                         const Rat& offset = Rat(0));

// Least y with |utility_lb(y)| >= c, scanning linearly from 0 through
// search_budget. Throws SearchBudgetExceeded when no such y is in range.
Nat inverse_utility_search(const UtilitySpec& u, const Nat& c,
                           std::uint64_t search_budget);

// q(x) = ceil(max_{y <= x} 1 / prior_lb(g_indices[y])): the least integer
// dominating every inverse prior seen so far. Non-decreasing in x, and
// q(x) * prior_lb(g_indices[x]) >= 1 by construction.
Nat q_function(std::uint64_t x, std::span<const Nat> g_indices);

// ceil of an exact rational, as a (possibly negative) integer.
Nat rat_ceil(const Rat& q);

}  // namespace eudiv

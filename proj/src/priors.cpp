#include "eudiv/priors.hpp"

#include "eudiv/errors.hpp"

namespace eudiv {

namespace {

Rat make_rat(const Nat& num, const Nat& den) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace

Rat prior_lb(const Nat& n) {
  return make_rat(1, pow2(2 * dyadic_block(n) + 2));
}

Rat prior_partial_sum(const Nat& N) {
  if (N == 0) return Rat(0);
  // Blocks b' < b contribute 2^-(b'+2) each; the current block contributes
  // (N+1 - 2^b) indices of weight 4^-(b+1).
  std::uint64_t b = dyadic_block(N);
  Rat whole = make_rat(1, 2) - make_rat(1, pow2(b + 1));
  Nat in_block = N + 1 - pow2(b);
  return whole + make_rat(in_block, pow2(2 * b + 2));
}

Rat prior_tail_mass(const Nat& N) { return make_rat(1, 2) - prior_partial_sum(N); }

Rat prior_tail_bound(const Nat& N) {
  return make_rat(1, pow2(dyadic_block(N) + 1));
}

Rat UtilitySpec::utility(const Nat& y) const {
  Rat base_val;
  if (base == UtilityBase::unbounded_id) {
    base_val = Rat(y);
  } else {
    base_val = Rat(1) - make_rat(1, y + 1);
  }
  return scale * base_val + offset;
}

Rat UtilitySpec::utility_lb(const Nat& y) const { return utility(y); }

UtilitySpec make_utility(const std::string& label, const Rat& scale,
                         const Rat& offset) {
  UtilitySpec u;
  u.label = label;
  u.scale = scale;
  u.offset = offset;
  if (label == "UNBOUNDED_ID") {
    u.base = UtilityBase::unbounded_id;
    u.bounded = (scale == 0);
    if (u.bounded) u.sup_abs = abs(offset);
  } else if (label == "BOUNDED_SAT") {
    u.base = UtilityBase::bounded_sat;
    u.bounded = true;
    // The base ranges over [0,1), so scale*base+offset lies between offset
    // and scale+offset; the closure of that segment bounds the magnitude.
    Rat lo = abs(offset);
    Rat hi = abs(scale + offset);
    u.sup_abs = lo > hi ? lo : hi;
  } else {
    throw ConfigError("unknown utility label \"" + label +
                      "\" (want UNBOUNDED_ID or BOUNDED_SAT)");
  }
  return u;
}

Nat inverse_utility_search(const UtilitySpec& u, const Nat& c,
                           std::uint64_t search_budget) {
  Rat target(c);
  for (std::uint64_t y = 0; y <= search_budget; ++y) {
    if (abs(u.utility_lb(nat(y))) >= target) return nat(y);
  }
  throw SearchBudgetExceeded("no y <= " + std::to_string(search_budget) +
                             " reaches |utility_lb(y)| >= " + c.get_str());
}

Nat rat_ceil(const Rat& q) {
  Nat r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

Nat q_function(std::uint64_t x, std::span<const Nat> g_indices) {
  if (g_indices.size() <= x) {
    throw Error("q_function: g_indices does not cover 0.." + std::to_string(x));
  }
  Rat best(0);
  for (std::uint64_t y = 0; y <= x; ++y) {
    Rat inv = Rat(1) / prior_lb(g_indices[y]);
    if (inv > best) best = inv;
  }
  return rat_ceil(best);
}

}  // namespace eudiv

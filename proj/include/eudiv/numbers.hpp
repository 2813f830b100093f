#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace eudiv {

// Exact arithmetic everywhere that matters: naturals are arbitrary-precision,
// rationals are canonical mpq. Step budgets/counters are uint64 — a single
// run of 2^64 steps is out of reach, and keeping the hot interpreter loop on
// machine words is what makes full-budget sweeps affordable.
using Nat = mpz_class;
using Rat = mpq_class;

inline bool fits_u64(const Nat& n) { return n.fits_ulong_p(); }

inline std::uint64_t to_u64(const Nat& n) { return n.get_ui(); }

inline Nat nat(std::uint64_t v) { return Nat(static_cast<unsigned long>(v)); }

// floor(log2(n+1)); the "dyadic block" of n used by the prior.
inline std::uint64_t dyadic_block(const Nat& n) {
  Nat m = n + 1;
  return static_cast<std::uint64_t>(mpz_sizeinbase(m.get_mpz_t(), 2)) - 1;
}

// 2^e as an exact natural.
inline Nat pow2(std::uint64_t e) {
  Nat r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(e));
  return r;
}

// Parse "num/den" (or plain "num", optionally negative) into an exact,
// canonical rational. Throws std::invalid_argument on malformed input or a
// zero denominator.
inline Rat rat_from_string(const std::string& text) {
  auto is_int = [](const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = s[0] == '-' ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
  };
  std::string num = text, den = "1";
  if (auto slash = text.find('/'); slash != std::string::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
  }
  if (!is_int(num) || !is_int(den)) {
    throw std::invalid_argument("bad rational \"" + text + "\"");
  }
  Nat n(num), d(den);
  if (d == 0) throw std::invalid_argument("zero denominator in \"" + text + "\"");
  Rat q(n, d);
  q.canonicalize();
  return q;
}

inline std::string rat_string(const Rat& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Nearest double, for plot-convenience columns only; never used in logic.
inline double rat_approx(const Rat& q) { return q.get_d(); }

}  // namespace eudiv

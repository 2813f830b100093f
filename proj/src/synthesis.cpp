#include "eudiv/synthesis.hpp"

#include <vector>

#include "eudiv/errors.hpp"

namespace eudiv {

namespace {

// Scratch register for unconditional jumps. No synthesized instruction ever
// increments it, so DJZ on it always takes the jump.
constexpr std::uint64_t kScratchReg = 8;

// Hard cap on synthesized program length; evidence tables are expanded in
// unary, so this bounds both memory and encoding cost.
constexpr std::uint64_t kMaxTableLen = std::uint64_t{1} << 26;

void append_incs(Program& p, std::uint64_t count) {
  for (std::uint64_t t = 0; t < count; ++t) p.push_back(inc(0));
}

std::uint64_t narrow_len(const Nat& n, const char* what) {
  if (!fits_u64(n) || to_u64(n) > kMaxTableLen) {
    throw Error(std::string("synthesize_table_program: ") + what +
                " pushes the table past the size cap");
  }
  return to_u64(n);
}

}  // namespace

EvidenceCheck check_evidence(const Program& p, const Evidence& evidence,
                             std::uint64_t budget) {
  bool undecided = false;
  for (const auto& [input, expected] : evidence) {
    EvalOutcome out = run(p, input, budget);
    if (!out.halted()) {
      undecided = true;
    } else if (out.value != expected) {
      return EvidenceCheck::contradicted;
    }
  }
  return undecided ? EvidenceCheck::undecided : EvidenceCheck::consistent;
}

Program synthesize_table_program(const Evidence& evidence,
                                 const Nat& default_value) {
  const std::uint64_t d = narrow_len(default_value, "default value");

  // Layout: a run of DJZ(0, _) tests consuming the input, one per natural up
  // to the largest evidence input (gap entries fall through to the default
  // block, evidence entries jump to their loader), then per-entry loaders
  // that rebuild the recorded value, then a default block that drains the
  // remaining input and loads default_value.
  Nat total_len = 0;
  std::vector<std::uint64_t> gaps;
  std::vector<std::uint64_t> values;
  if (!evidence.empty()) {
    Nat prev = 0;
    bool first = true;
    for (const auto& [input, value] : evidence) {
      Nat gap = first ? input : Nat(input - prev - 1);
      gaps.push_back(narrow_len(gap, "evidence input"));
      values.push_back(narrow_len(value, "evidence value"));
      total_len += gap + 1;  // tests for this entry
      total_len += value + 1;  // loader for this entry
      prev = input;
      first = false;
    }
    total_len += 1;  // unconditional jump after the last test
  }
  total_len += 2 + default_value;  // default block
  narrow_len(total_len, "total length");

  Program prog;
  prog.reserve(to_u64(total_len));
  const std::uint64_t m = gaps.size();

  std::uint64_t tests_len = m > 0 ? m + 1 : 0;
  for (std::uint64_t j = 0; j < m; ++j) tests_len += gaps[j];

  std::vector<std::uint64_t> loader_at(m);
  std::uint64_t pos = tests_len;
  for (std::uint64_t j = 0; j < m; ++j) {
    loader_at[j] = pos;
    pos += values[j] + 1;
  }
  const std::uint64_t default_at = pos;
  const std::uint64_t end = default_at + 2 + d;

  for (std::uint64_t j = 0; j < m; ++j) {
    for (std::uint64_t t = 0; t < gaps[j]; ++t) {
      prog.push_back(djz(0, nat(default_at)));
    }
    prog.push_back(djz(0, nat(loader_at[j])));
  }
  if (m > 0) prog.push_back(djz(kScratchReg, nat(default_at)));
  for (std::uint64_t j = 0; j < m; ++j) {
    append_incs(prog, values[j]);
    prog.push_back(djz(kScratchReg, nat(end)));
  }
  prog.push_back(djz(0, nat(default_at + 2)));
  prog.push_back(djz(kScratchReg, nat(default_at)));
  append_incs(prog, d);

  // Self-check: the table must reproduce the evidence and hit the default on
  // fresh inputs. Budget covers the input drain plus both block walks.
  std::vector<std::pair<Nat, Nat>> checks(evidence.begin(), evidence.end());
  Nat probe = 0;
  for (int needed = 3; needed > 0; ++probe) {
    if (evidence.count(probe)) continue;
    checks.emplace_back(probe, default_value);
    --needed;
  }
  for (const auto& [input, expected] : checks) {
    Nat bound = 3 * input + total_len + default_value + 64;
    EvalOutcome out = run(prog, input, to_u64(bound));
    if (!out.halted() || out.value != expected) {
      throw Error("synthesize_table_program: self-check failed on input " +
                  input.get_str());
    }
  }
  return prog;
}

Nat synthesize_G(const Nat& n, const Evidence& evidence, const Nat& k,
                 const UtilitySpec& utility, std::uint64_t eval_budget,
                 std::uint64_t search_budget) {
  if (evidence.count(k)) {
    throw ConfigError(
        "synthesize_G: distinguished input k collides with an evidence "
        "input");
  }
  EvalOutcome src = run(decode(n), k, eval_budget);
  if (!src.halted()) {
    throw SourceNotHaltedWithinBudget("synthesize_G: program " + n.get_str() +
                                      " did not halt on input " +
                                      k.get_str() + " within " +
                                      std::to_string(eval_budget) + " steps");
  }
  Nat target = inverse_utility_search(utility, src.value, search_budget);
  Program table = synthesize_table_program(evidence, target);
  return encode(table);
}

Nat fixed_point(const std::function<Program(const Nat&)>& transformer,
                std::span<const Nat> probes, std::uint64_t probe_budget,
                std::uint64_t search_cap) {
  auto probe_equivalent = [&](const Program& a, const Program& b) {
    for (const Nat& x : probes) {
      if (run(a, x, probe_budget) != run(b, x, probe_budget)) return false;
    }
    return true;
  };

  // Phase 1: iterate the index map looking for a syntactic fixed point,
  // where decode(p) and transformer(p) are the same program. An orbit that
  // escapes the representable range just means no syntactic fixed point lies
  // along it, so construction failures fall through to the scan.
  Nat p = 0;
  for (int iter = 0; iter < 64; ++iter) {
    Nat next;
    try {
      next = encode(transformer(p));
    } catch (const std::exception&) {
      break;
    }
    if (next == p) return p;
    p = next;
  }

  // Phase 2: bounded extensional search over small indices.
  for (std::uint64_t cand = 0; cand <= search_cap; ++cand) {
    Nat idx = nat(cand);
    if (probe_equivalent(decode(idx), transformer(idx))) return idx;
  }

  throw FixedPointNotFound(
      "fixed_point: syntactic iteration did not converge and no index up to " +
      std::to_string(search_cap) +
      " is probe-equivalent to its transformed program");
}

}  // namespace eudiv

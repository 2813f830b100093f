#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "eudiv/numbers.hpp"

namespace eudiv {

// Two-instruction register machine over unbounded natural registers.
//
//   INC r    increment register r, advance pc
//   DJZ r a  if register r is zero jump to a, else decrement r and advance pc
//
// Each instruction costs one step. Input arrives in register 0, every other
// register starts at zero, and the machine halts as soon as pc is at or past
// the end of the program (a jump past the end is a halt; there is no HALT
// opcode). The halting value is register 0.

enum class Op { inc, djz };

struct Instruction {
  Op op;
  Nat reg;
  Nat addr;  // DJZ jump target; unused for INC

  friend bool operator==(const Instruction& a, const Instruction& b) {
    if (a.op != b.op || a.reg != b.reg) return false;
    return a.op == Op::inc || a.addr == b.addr;
  }
};

using Program = std::vector<Instruction>;

inline Instruction inc(Nat r) { return Instruction{Op::inc, std::move(r), 0}; }
inline Instruction djz(Nat r, Nat a) {
  return Instruction{Op::djz, std::move(r), std::move(a)};
}

enum class RunStatus { halted, budget_exceeded };

struct EvalOutcome {
  RunStatus status;
  Nat value;            // register 0 at halt; meaningful only when halted
  std::uint64_t steps;  // steps executed at halt; meaningful only when halted
  std::uint64_t budget; // the budget the run was given

  bool halted() const { return status == RunStatus::halted; }

  static EvalOutcome halt(Nat v, std::uint64_t steps, std::uint64_t budget) {
    return EvalOutcome{RunStatus::halted, std::move(v), steps, budget};
  }
  static EvalOutcome exceeded(std::uint64_t budget) {
    return EvalOutcome{RunStatus::budget_exceeded, Nat(0), 0, budget};
  }

  friend bool operator==(const EvalOutcome& a, const EvalOutcome& b) {
    if (a.status != b.status) return false;
    if (a.status == RunStatus::budget_exceeded) return a.budget == b.budget;
    return a.value == b.value && a.steps == b.steps;
  }
};

std::ostream& operator<<(std::ostream& os, const EvalOutcome& o);

// Machine configuration as seen by the naive tracer; exposed so tests can
// inspect intermediate states (e.g. register non-negativity).
struct MachineState {
  std::map<Nat, Nat> regs;  // sparse: absent means zero
  std::size_t pc = 0;
  std::uint64_t steps = 0;
};

// Deterministic bounded evaluation. Identical results from run() and
// run_reference() on every (program, input, budget); run() takes a machine
// word fast path with a provably outcome-preserving non-termination pruner,
// run_reference() is the plain big-int tracer kept as the testing oracle.
EvalOutcome run(const Program& p, const Nat& input, std::uint64_t budget);
EvalOutcome run_reference(const Program& p, const Nat& input,
                          std::uint64_t budget);

// Single step of the reference machine; false once halted.
bool step_reference(const Program& p, MachineState& st);

// Cantor pairing bijection N x N <-> N.
Nat pair(const Nat& a, const Nat& b);
std::pair<Nat, Nat> unpair(const Nat& n);

// Total bijection N <-> Program. Instructions code as INC(r) -> 2r,
// DJZ(r,a) -> 2*pair(r,a)+1; a nonempty sequence c1..cl codes as
// 1 + pair(l-1, pair(c1, pair(c2, ... cl))), the empty program as 0.
// Index 0 is therefore the empty program, which computes the identity.
Nat encode(const Program& p);
Program decode(const Nat& n);

// Text format: one instruction per line, "INC r" or "DJZ r a", decimal
// naturals. parse_program throws ParseError with a line number.
std::string format_program(const Program& p);
Program parse_program(const std::string& text);

}  // namespace eudiv

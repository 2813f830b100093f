#include "eudiv/machine.hpp"

#include <cctype>
#include <limits>
#include <sstream>

#include "eudiv/errors.hpp"

namespace eudiv {

std::ostream& operator<<(std::ostream& os, const EvalOutcome& o) {
  if (o.halted()) return os << "Halted(" << o.value << ", " << o.steps << ")";
  return os << "BudgetExceeded(" << o.budget << ")";
}

// ---------------------------------------------------------------------------
// Reference interpreter: the plain sparse big-int tracer. No shortcuts; this
// is the oracle the fast path is tested against.

bool step_reference(const Program& p, MachineState& st) {
  if (st.pc >= p.size()) return false;
  const Instruction& ins = p[st.pc];
  if (ins.op == Op::inc) {
    st.regs[ins.reg] += 1;
    st.pc += 1;
  } else {
    auto it = st.regs.find(ins.reg);
    if (it == st.regs.end() || it->second == 0) {
      // Jump; a target at or past the end parks the pc at p.size() (halt).
      if (ins.addr >= p.size()) {
        st.pc = p.size();
      } else {
        st.pc = static_cast<std::size_t>(ins.addr.get_ui());
      }
    } else {
      it->second -= 1;
      st.pc += 1;
    }
  }
  st.steps += 1;
  return true;
}

EvalOutcome run_reference(const Program& p, const Nat& input,
                          std::uint64_t budget) {
  MachineState st;
  if (input != 0) st.regs[0] = input;
  for (;;) {
    if (st.pc >= p.size()) {
      auto it = st.regs.find(0);
      return EvalOutcome::halt(it == st.regs.end() ? Nat(0) : it->second,
                               st.steps, budget);
    }
    if (st.steps == budget) return EvalOutcome::exceeded(budget);
    step_reference(p, st);
  }
}

// ---------------------------------------------------------------------------
// Fast interpreter. Register values cannot exceed input + steps (each step
// adds at most one to one register), so whenever input + budget fits in a
// machine word the whole run does. Register *indices* are almost always tiny;
// programs indexing registers past the dense window fall back to the
// reference tracer rather than complicating the hot loop.

namespace {

constexpr std::uint64_t kMaxDenseReg = 1u << 22;

struct LoweredIns {
  Op op;
  std::uint64_t reg;
  std::uint64_t addr;  // clamped to p.size() == halt
};

bool lower(const Program& p, std::vector<LoweredIns>& out,
           std::uint64_t& max_reg) {
  out.clear();
  out.reserve(p.size());
  max_reg = 0;
  const std::uint64_t len = p.size();
  for (const Instruction& ins : p) {
    if (!fits_u64(ins.reg)) return false;
    std::uint64_t r = to_u64(ins.reg);
    if (r > kMaxDenseReg) return false;
    if (r > max_reg) max_reg = r;
    std::uint64_t a = len;
    if (ins.op == Op::djz && fits_u64(ins.addr) && to_u64(ins.addr) < len) {
      a = to_u64(ins.addr);
    }
    out.push_back(LoweredIns{ins.op, r, a});
  }
  return true;
}

}  // namespace

EvalOutcome run(const Program& p, const Nat& input, std::uint64_t budget) {
  std::vector<LoweredIns> code;
  std::uint64_t max_reg = 0;
  if (!fits_u64(input) || !lower(p, code, max_reg) ||
      to_u64(input) > std::numeric_limits<std::uint64_t>::max() - budget) {
    return run_reference(p, input, budget);
  }

  const std::uint64_t len = code.size();
  std::vector<std::uint64_t> regs(max_reg + 1, 0);
  regs[0] = to_u64(input);

  std::uint64_t pc = 0;
  std::uint64_t steps = 0;
  // Count consecutive jumps taken on a zero register. Such steps leave every
  // register untouched, so after len+1 of them some pc must have repeated
  // with identical state: the machine is in a cycle and can never halt. The
  // outcome is then BudgetExceeded(budget) for every budget, exactly what the
  // plain tracer would report after grinding the budget down.
  std::uint64_t zero_jump_streak = 0;

  for (;;) {
    if (pc >= len) return EvalOutcome::halt(nat(regs[0]), steps, budget);
    if (steps == budget) return EvalOutcome::exceeded(budget);
    const LoweredIns& ins = code[pc];
    if (ins.op == Op::inc) {
      ++regs[ins.reg];
      ++pc;
      zero_jump_streak = 0;
    } else if (regs[ins.reg] == 0) {
      pc = ins.addr;
      if (++zero_jump_streak > len) return EvalOutcome::exceeded(budget);
    } else {
      --regs[ins.reg];
      ++pc;
      zero_jump_streak = 0;
    }
    ++steps;
  }
}

// ---------------------------------------------------------------------------
// Cantor pairing and the program numbering.

Nat pair(const Nat& a, const Nat& b) {
  Nat s = a + b;
  return s * (s + 1) / 2 + b;
}

std::pair<Nat, Nat> unpair(const Nat& n) {
  // w = floor((sqrt(8n+1)-1)/2): the diagonal containing n.
  Nat disc = 8 * n + 1;
  Nat root;
  mpz_sqrt(root.get_mpz_t(), disc.get_mpz_t());
  Nat w = (root - 1) / 2;
  Nat t = w * (w + 1) / 2;
  Nat b = n - t;
  Nat a = w - b;
  return {a, b};
}

namespace {

Nat encode_instruction(const Instruction& ins) {
  if (ins.op == Op::inc) return 2 * ins.reg;
  return 2 * pair(ins.reg, ins.addr) + 1;
}

Instruction decode_instruction(const Nat& code) {
  if (code % 2 == 0) return inc(code / 2);
  auto [r, a] = unpair((code - 1) / 2);
  return djz(r, a);
}

}  // namespace

Nat encode(const Program& p) {
  if (p.empty()) return 0;
  Nat acc = encode_instruction(p.back());
  for (std::size_t i = p.size() - 1; i-- > 0;) {
    acc = pair(encode_instruction(p[i]), acc);
  }
  return 1 + pair(Nat(static_cast<unsigned long>(p.size() - 1)), acc);
}

Program decode(const Nat& n) {
  if (n == 0) return {};
  auto [len_minus_1, acc] = unpair(n - 1);
  // A decoded length beyond the size cap cannot be materialized; the
  // numbering makes such indices towers of exponentials, far past anything a
  // dovetail sweep reaches, so this is a pure sanity guard.
  constexpr std::uint64_t kMaxDecodedLen = std::uint64_t{1} << 26;
  if (!fits_u64(len_minus_1) || to_u64(len_minus_1) >= kMaxDecodedLen) {
    throw Error("decode: program length exceeds the size cap");
  }
  std::uint64_t count = to_u64(len_minus_1) + 1;
  Program p;
  p.reserve(count);
  for (std::uint64_t i = 0; i + 1 < count; ++i) {
    auto [code, rest] = unpair(acc);
    p.push_back(decode_instruction(code));
    acc = rest;
  }
  p.push_back(decode_instruction(acc));
  return p;
}

// ---------------------------------------------------------------------------
// Text format.

std::string format_program(const Program& p) {
  std::ostringstream os;
  for (const Instruction& ins : p) {
    if (ins.op == Op::inc) {
      os << "INC " << ins.reg << "\n";
    } else {
      os << "DJZ " << ins.reg << " " << ins.addr << "\n";
    }
  }
  return os.str();
}

namespace {

bool is_natural_token(const std::string& tok) {
  if (tok.empty()) return false;
  for (char c : tok) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void bad_line(std::size_t lineno, const std::string& line) {
  throw ParseError("line " + std::to_string(lineno) + ": bad instruction \"" +
                   line + "\" (want \"INC r\" or \"DJZ r a\")");
}

}  // namespace

Program parse_program(const std::string& text) {
  Program p;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string opname;
    if (!(ls >> opname)) continue;  // blank line
    std::string a, b, extra;
    if (opname == "INC") {
      if (!(ls >> a) || (ls >> extra) || !is_natural_token(a)) {
        bad_line(lineno, line);
      }
      p.push_back(inc(Nat(a)));
    } else if (opname == "DJZ") {
      if (!(ls >> a >> b) || (ls >> extra) || !is_natural_token(a) ||
          !is_natural_token(b)) {
        bad_line(lineno, line);
      }
      p.push_back(djz(Nat(a), Nat(b)));
    } else {
      bad_line(lineno, line);
    }
  }
  return p;
}

}  // namespace eudiv

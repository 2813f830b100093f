#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "eudiv/errors.hpp"
#include "eudiv/machine.hpp"

using namespace eudiv;

namespace {

Program random_program(std::mt19937& rng, std::size_t max_len,
                       std::uint64_t max_reg, std::uint64_t max_addr) {
  std::uniform_int_distribution<std::size_t> len_d(0, max_len);
  std::uniform_int_distribution<std::uint64_t> reg_d(0, max_reg);
  std::uniform_int_distribution<std::uint64_t> addr_d(0, max_addr);
  std::uniform_int_distribution<int> op_d(0, 1);
  Program p;
  std::size_t len = len_d(rng);
  for (std::size_t i = 0; i < len; ++i) {
    if (op_d(rng) == 0) {
      p.push_back(inc(nat(reg_d(rng))));
    } else {
      p.push_back(djz(nat(reg_d(rng)), nat(addr_d(rng))));
    }
  }
  return p;
}

}  // namespace

TEST_CASE("semantics of the two instructions") {
  // Empty program: halts immediately with the input, even at budget 0.
  CHECK(run({}, 7, 10) == EvalOutcome::halt(7, 0, 10));
  CHECK(run({}, 0, 0) == EvalOutcome::halt(0, 0, 0));
  // INC bumps register 0 and falls off the end.
  CHECK(run({inc(0)}, 4, 10) == EvalOutcome::halt(5, 1, 10));
  // DJZ on a nonzero register decrements and advances — one step, then halt.
  CHECK(run({djz(0, 0)}, 3, 100) == EvalOutcome::halt(2, 1, 100));
  // DJZ on a zero register jumps; target 0 here, so it spins forever.
  CHECK(run({djz(0, 0)}, 0, 100) == EvalOutcome::exceeded(100));
  // A jump past the end is a halt.
  CHECK(run({djz(0, 99)}, 0, 10) == EvalOutcome::halt(0, 1, 10));
  // INC on another register leaves the output in register 0 untouched.
  CHECK(run({inc(1)}, 2, 10) == EvalOutcome::halt(2, 1, 10));
}

TEST_CASE("budget boundary") {
  CHECK(run({inc(0)}, 4, 0) == EvalOutcome::exceeded(0));
  CHECK(run({inc(0)}, 4, 1) == EvalOutcome::halt(5, 1, 1));
  // Halted outcomes compare equal across budgets; exceeded ones do not.
  CHECK(EvalOutcome::halt(5, 1, 1) == EvalOutcome::halt(5, 1, 99));
  CHECK(EvalOutcome::exceeded(10) != EvalOutcome::exceeded(11));
}

TEST_CASE("budget monotonicity: a halt stays identical under larger budgets") {
  std::mt19937 rng(20240817);
  for (int t = 0; t < 200; ++t) {
    Program p = random_program(rng, 6, 3, 8);
    for (std::uint64_t input : {0, 1, 2, 5}) {
      EvalOutcome small = run(p, nat(input), 100);
      if (small.halted()) {
        CHECK(run(p, nat(input), 201) == small);
        CHECK(run(p, nat(input), 100000) == small);
      }
    }
  }
}

TEST_CASE("Cantor pairing") {
  CHECK(pair(0, 0) == 0);
  CHECK(pair(1, 0) == 1);
  CHECK(pair(0, 1) == 2);
  CHECK(pair(2, 0) == 3);
  CHECK(pair(1, 1) == 4);
  CHECK(pair(1, 2) == 8);
  CHECK(unpair(1) == std::pair<Nat, Nat>(1, 0));
  CHECK(unpair(2) == std::pair<Nat, Nat>(0, 1));
  for (std::uint64_t n = 0; n < 2000; ++n) {
    auto [a, b] = unpair(nat(n));
    CHECK(pair(a, b) == nat(n));
  }
  for (std::uint64_t a = 0; a < 40; ++a) {
    for (std::uint64_t b = 0; b < 40; ++b) {
      CHECK(unpair(pair(nat(a), nat(b))) == std::pair<Nat, Nat>(nat(a), nat(b)));
    }
  }
  // Stays exact far past machine words.
  Nat big = Nat(1) << 100;
  auto [a, b] = unpair(pair(big, big + 3));
  CHECK(a == big);
  CHECK(b == big + 3);
}

TEST_CASE("program numbering: frozen anchor points") {
  CHECK(encode({}) == 0);
  CHECK(encode({inc(0)}) == 1);
  CHECK(encode({inc(0), inc(0)}) == 2);
  CHECK(encode({djz(0, 0)}) == 3);
  CHECK(encode({inc(1)}) == 6);
  CHECK(encode({djz(0, 1)}) == 21);
  CHECK(decode(0).empty());
  CHECK(decode(7) == Program{inc(0), inc(0), inc(0), inc(0)});
  CHECK(decode(5) == Program{djz(0, 0), inc(0)});
  CHECK(decode(9) == Program{inc(0), djz(0, 0)});
  CHECK(decode(10) == Program{djz(1, 0)});
}

TEST_CASE("program numbering is a bijection") {
  for (std::uint64_t n = 0; n < 5000; ++n) {
    CHECK(encode(decode(nat(n))) == nat(n));
  }
  std::mt19937 rng(7);
  for (int t = 0; t < 200; ++t) {
    Program p = random_program(rng, 5, 10, 12);
    CHECK(decode(encode(p)) == p);
  }
}

TEST_CASE("decode rejects indices whose length field is absurd") {
  CHECK_THROWS_AS(decode(1 + pair(pow2(70), 0)), Error);
  CHECK_THROWS_AS(decode(1 + pair(nat(std::uint64_t{1} << 26), 0)), Error);
}

TEST_CASE("fast interpreter matches the reference tracer") {
  // Handpicked cycle shapes, including ones only the pruner can cut short.
  std::vector<Program> picked = {
      {djz(1, 0)},                       // self-jump on an empty register
      {djz(0, 0)},                       // spins only on input 0
      {djz(1, 1), djz(2, 0)},            // two-site jump cycle
      {inc(1), djz(2, 0)},               // INC resets the jump streak
      {djz(0, 2), djz(8, 0), inc(0)},    // drain-then-load
      {inc(0), djz(0, 0)},               // grows then drains forever
  };
  for (const Program& p : picked) {
    for (std::uint64_t input : {0, 1, 2, 5}) {
      for (std::uint64_t budget : {0, 1, 7, 100, 5000}) {
        CAPTURE(format_program(p));
        CHECK(run(p, nat(input), budget) ==
              run_reference(p, nat(input), budget));
      }
    }
  }
  std::mt19937 rng(99);
  for (int t = 0; t < 300; ++t) {
    Program p = random_program(rng, 6, 3, 8);
    for (std::uint64_t input : {0, 1, 2, 5}) {
      for (std::uint64_t budget : {0, 1, 7, 100, 5000}) {
        CHECK(run(p, nat(input), budget) ==
              run_reference(p, nat(input), budget));
      }
    }
  }
}

TEST_CASE("fast interpreter falls back cleanly outside the word-size window") {
  Nat huge = Nat(1) << 80;
  CHECK(run({inc(0)}, huge, 5) == EvalOutcome::halt(huge + 1, 1, 5));
  CHECK(run({inc(0)}, huge, 5) == run_reference({inc(0)}, huge, 5));
  // Register index past the dense window.
  Program wide = {inc(Nat(1) << 30)};
  CHECK(run(wide, 2, 5) == EvalOutcome::halt(2, 1, 5));
  CHECK(run(wide, 2, 5) == run_reference(wide, 2, 5));
}

TEST_CASE("step_reference exposes machine states") {
  MachineState st;
  st.regs[0] = 2;
  Program p = {inc(1), djz(0, 0)};
  CHECK(step_reference(p, st));
  CHECK(st.pc == 1);
  CHECK(st.regs[1] == 1);
  CHECK(step_reference(p, st));  // djz: reg0=2 -> decrement, advance
  CHECK(st.pc == 2);
  CHECK(st.regs[0] == 1);
  CHECK_FALSE(step_reference(p, st));  // halted
  CHECK(st.steps == 2);
}

TEST_CASE("program text round trip") {
  Program p = {inc(0), djz(3, 7), inc(Nat("123456789012345678901234567890"))};
  CHECK(parse_program(format_program(p)) == p);
  CHECK(format_program({}).empty());
  CHECK(parse_program("").empty());
  CHECK(parse_program("\n  \nINC 2\n\n") == Program{inc(2)});
}

TEST_CASE("parse errors carry line numbers") {
  auto message_of = [](const std::string& text) {
    try {
      parse_program(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message_of("INC 1\nMOV 2").find("line 2") != std::string::npos);
  CHECK_THROWS_AS(parse_program("INC"), ParseError);
  CHECK_THROWS_AS(parse_program("DJZ 1"), ParseError);
  CHECK_THROWS_AS(parse_program("INC 1 2"), ParseError);
  CHECK_THROWS_AS(parse_program("INC -1"), ParseError);
  CHECK_THROWS_AS(parse_program("DJZ 1 x"), ParseError);
}

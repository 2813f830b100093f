#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eudiv/errors.hpp"
#include "eudiv/synthesis.hpp"

using namespace eudiv;

TEST_CASE("empty-evidence table program is the drain-and-load idiom") {
  Program p = synthesize_table_program({}, 9);
  Program expected = {djz(0, 2), djz(8, 0)};
  for (int i = 0; i < 9; ++i) expected.push_back(inc(0));
  CHECK(p == expected);
  for (std::uint64_t x : {0, 1, 5, 100}) {
    EvalOutcome out = run(p, nat(x), 10000);
    REQUIRE(out.halted());
    CHECK(out.value == 9);
  }
  // Default 0 is the two-instruction constant-zero program.
  CHECK(synthesize_table_program({}, 0) == Program{djz(0, 2), djz(8, 0)});
}

TEST_CASE("evidence table program reproduces the table and the default") {
  Evidence ev{{Nat(0), Nat(0)}, {Nat(1), Nat(1)}};
  Program p = synthesize_table_program(ev, 9);
  CHECK(p.size() == 17);
  auto value_on = [&](std::uint64_t x) {
    EvalOutcome out = run(p, nat(x), 10000);
    REQUIRE(out.halted());
    return out.value;
  };
  CHECK(value_on(0) == 0);
  CHECK(value_on(1) == 1);
  CHECK(value_on(2) == 9);
  CHECK(value_on(7) == 9);
  CHECK(value_on(200) == 9);
}

TEST_CASE("evidence table with gaps and zero values") {
  Evidence ev{{Nat(2), Nat(5)}, {Nat(7), Nat(0)}};
  Program p = synthesize_table_program(ev, 3);
  auto value_on = [&](std::uint64_t x) {
    EvalOutcome out = run(p, nat(x), 10000);
    REQUIRE(out.halted());
    return out.value;
  };
  CHECK(value_on(2) == 5);
  CHECK(value_on(7) == 0);
  CHECK(value_on(0) == 3);
  CHECK(value_on(3) == 3);
  CHECK(value_on(6) == 3);
  CHECK(value_on(8) == 3);
  CHECK(value_on(100) == 3);
}

TEST_CASE("table synthesis enforces the size cap") {
  CHECK_THROWS_AS(synthesize_table_program({}, Nat(1) << 30), Error);
  Evidence huge_value{{Nat(1), Nat(1) << 30}};
  CHECK_THROWS_AS(synthesize_table_program(huge_value, 0), Error);
  Evidence huge_input{{Nat(1) << 30, Nat(1)}};
  CHECK_THROWS_AS(synthesize_table_program(huge_input, 0), Error);
}

TEST_CASE("evidence checking is three-valued") {
  Evidence want_identity{{Nat(0), Nat(0)}, {Nat(1), Nat(1)}};
  CHECK(check_evidence({}, want_identity, 100) == EvidenceCheck::consistent);
  CHECK(check_evidence({inc(0)}, want_identity, 100) ==
        EvidenceCheck::contradicted);
  // DJZ 0 0 spins on input 0 (undecided) but halts wrong on input 1:
  // contradiction wins.
  CHECK(check_evidence({djz(0, 0)}, want_identity, 100) ==
        EvidenceCheck::contradicted);
  Evidence zero_only{{Nat(0), Nat(0)}};
  CHECK(check_evidence({djz(0, 0)}, zero_only, 100) ==
        EvidenceCheck::undecided);
}

TEST_CASE("synthesized index matches evidence and hits the utility target") {
  Evidence ev{{Nat(0), Nat(0)}, {Nat(1), Nat(1)}};
  UtilitySpec id = make_utility("UNBOUNDED_ID");
  // Source 0 is the identity: on k = 2 it outputs 2, so the target is the
  // least y with |y| >= 2, which is 2 itself.
  Nat g = synthesize_G(0, ev, 2, id, 100000, 100000);
  Program gp = decode(g);
  CHECK(gp == synthesize_table_program(ev, 2));
  EvalOutcome on_k = run(gp, 2, 100000);
  REQUIRE(on_k.halted());
  CHECK(on_k.value == 2);
  CHECK(check_evidence(gp, ev, 100000) == EvidenceCheck::consistent);

  // Source 3 is "DJZ 0 0": on k = 2 it outputs 1.
  Nat g3 = synthesize_G(3, ev, 2, id, 100000, 100000);
  CHECK(decode(g3) == synthesize_table_program(ev, 1));
}

TEST_CASE("synthesis failure modes") {
  Evidence ev{{Nat(0), Nat(0)}};
  UtilitySpec id = make_utility("UNBOUNDED_ID");
  UtilitySpec sat = make_utility("BOUNDED_SAT");
  // Index 10 is "DJZ 1 0": spins on every input.
  CHECK_THROWS_AS(synthesize_G(10, ev, 2, id, 5000, 5000),
                  SourceNotHaltedWithinBudget);
  // k = 2 outputs 2, but the saturating utility never reaches magnitude 2.
  CHECK_THROWS_AS(synthesize_G(0, ev, 2, sat, 5000, 5000),
                  SearchBudgetExceeded);
  Evidence with_k{{Nat(2), Nat(7)}};
  CHECK_THROWS_AS(synthesize_G(0, with_k, 2, id, 5000, 5000), ConfigError);
}

TEST_CASE("fixed point of a constant transformer via syntactic iteration") {
  for (std::uint64_t b : {0, 5, 7}) {
    auto transformer = [&](const Nat&) {
      return synthesize_table_program({}, nat(b));
    };
    std::vector<Nat> probes{Nat(0), Nat(1), Nat(2), Nat(3)};
    Nat p = fixed_point(transformer, probes, 100000, 50);
    Program prog = decode(p);
    CHECK(prog == transformer(p));  // literally its own transform
    for (const Nat& x : probes) {
      EvalOutcome out = run(prog, x, 100000);
      REQUIRE(out.halted());
      CHECK(out.value == nat(b));
    }
  }
}

TEST_CASE("no small fixed point exists for the successor-shift transformer") {
  // transformer(p) computes p + 7 on every input; a fixed point would be a
  // program printing its own index plus seven. The index cost of writing a
  // value out in unary squares per instruction, so any such index dwarfs its
  // output and the bounded search must come up empty.
  auto transformer = [](const Nat& p) {
    return synthesize_table_program({}, p + 7);
  };
  std::vector<Nat> probes{Nat(0), Nat(1), Nat(2), Nat(3)};
  CHECK_THROWS_AS(fixed_point(transformer, probes, 10000, 300),
                  FixedPointNotFound);

  // Independent sweep of the same range: no candidate even matches on the
  // first probe.
  for (std::uint64_t p = 0; p <= 300; ++p) {
    EvalOutcome out = run(decode(nat(p)), 0, 10000);
    if (!out.halted()) continue;
    CHECK(out.value != nat(p) + 7);
  }
}

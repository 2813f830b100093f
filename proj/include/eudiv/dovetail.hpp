#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "eudiv/machine.hpp"

namespace eudiv {

// Rectangular dovetail table: row n is run(decode(n), k, budget) for every
// n in 0..n_max. Row 0 is the empty program (identity), so it always halts.
struct EvalTable {
  Nat k;
  std::uint64_t budget = 0;
  std::vector<EvalOutcome> rows;

  std::uint64_t n_max() const { return rows.size() - 1; }

  friend bool operator==(const EvalTable& a, const EvalTable& b) {
    return a.k == b.k && a.budget == b.budget && a.rows == b.rows;
  }
};

// Rows are independent pure computations; evaluate_range runs them on an
// OpenMP worklist and assembles the table in index order, which makes it
// bitwise identical to evaluate_range_serial (property-tested, and raced
// against each other by the bench_kernels tool).
EvalTable evaluate_range(const Nat& k, std::uint64_t n_max,
                         std::uint64_t budget);
EvalTable evaluate_range_serial(const Nat& k, std::uint64_t n_max,
                                std::uint64_t budget);

// Step-budgeted busy-beaver lower bound at x: the largest halting value among
// rows 0..x, with the least index attaining it.
struct BBRecord {
  std::uint64_t x;
  Nat value;
  std::uint64_t argmax_index;
  std::uint64_t budget;
};

// Throws NoHaltingIndex if no row at or below x halted (unreachable from
// tables produced by evaluate_range, since row 0 halts; still reported
// rather than silently defaulted).
BBRecord busy_beaver_lb(const EvalTable& table, std::uint64_t x);

// All x <= x_max where the busy-beaver bound strictly exceeds f's output on
// input x. f must halt on every probed input within the table budget
// (FunctionNotTotalWithinBudget otherwise).
std::vector<std::uint64_t> dominance_check(const EvalTable& table,
                                           const Program& f,
                                           std::uint64_t x_max);

// CSV with header "n,halted,value,steps"; value/steps are blank on
// budget-exceeded rows.
void write_eval_table_csv(std::ostream& os, const EvalTable& table);

}  // namespace eudiv

#include "eudiv/dovetail.hpp"

#include <omp.h>

#include "eudiv/errors.hpp"

namespace eudiv {

namespace {

EvalTable evaluate_range_impl(const Nat& k, std::uint64_t n_max,
                              std::uint64_t budget, bool parallel) {
  EvalTable table;
  table.k = k;
  table.budget = budget;
  table.rows.resize(n_max + 1);

  const std::int64_t count = static_cast<std::int64_t>(n_max) + 1;
#pragma omp parallel for schedule(dynamic, 64) if (parallel)
  for (std::int64_t n = 0; n < count; ++n) {
    // Each iteration touches only its own slot, so the assembled table does
    // not depend on scheduling.
    table.rows[static_cast<std::size_t>(n)] =
        run(decode(nat(static_cast<std::uint64_t>(n))), k, budget);
  }
  return table;
}

}  // namespace

EvalTable evaluate_range(const Nat& k, std::uint64_t n_max,
                         std::uint64_t budget) {
  return evaluate_range_impl(k, n_max, budget, true);
}

EvalTable evaluate_range_serial(const Nat& k, std::uint64_t n_max,
                                std::uint64_t budget) {
  return evaluate_range_impl(k, n_max, budget, false);
}

BBRecord busy_beaver_lb(const EvalTable& table, std::uint64_t x) {
  if (x > table.n_max()) {
    throw Error("busy_beaver_lb: x exceeds table range");
  }
  bool found = false;
  BBRecord best{x, Nat(0), 0, table.budget};
  for (std::uint64_t n = 0; n <= x; ++n) {
    const EvalOutcome& row = table.rows[n];
    if (!row.halted()) continue;
    // Strict > keeps the least index among ties.
    if (!found || row.value > best.value) {
      best.value = row.value;
      best.argmax_index = n;
      found = true;
    }
  }
  if (!found) {
    throw NoHaltingIndex("busy_beaver_lb: no halting index at or below " +
                         std::to_string(x));
  }
  return best;
}

std::vector<std::uint64_t> dominance_check(const EvalTable& table,
                                           const Program& f,
                                           std::uint64_t x_max) {
  if (x_max > table.n_max()) {
    throw Error("dominance_check: x_max exceeds table range");
  }
  std::vector<std::uint64_t> crossings;
  bool found = false;
  Nat running_max = 0;
  for (std::uint64_t x = 0; x <= x_max; ++x) {
    const EvalOutcome& row = table.rows[x];
    if (row.halted() && (!found || row.value > running_max)) {
      running_max = row.value;
      found = true;
    }
    if (!found) {
      throw NoHaltingIndex("dominance_check: no halting index at or below " +
                           std::to_string(x));
    }
    EvalOutcome fx = run(f, nat(x), table.budget);
    if (!fx.halted()) {
      throw FunctionNotTotalWithinBudget(
          "dominance_check: comparison program did not halt on input " +
          std::to_string(x) + " within " + std::to_string(table.budget) +
          " steps");
    }
    if (running_max > fx.value) crossings.push_back(x);
  }
  return crossings;
}

void write_eval_table_csv(std::ostream& os, const EvalTable& table) {
  os << "n,halted,value,steps\n";
  for (std::size_t n = 0; n < table.rows.size(); ++n) {
    const EvalOutcome& row = table.rows[n];
    if (row.halted()) {
      os << n << ",1," << row.value.get_str() << ',' << row.steps << '\n';
    } else {
      os << n << ",0,,\n";
    }
  }
}

}  // namespace eudiv

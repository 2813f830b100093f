// Benchmark: OpenMP worklist kernels against their serial reference
// implementations, plus the machine-word interpreter against the big-int
// tracer. Every comparison also asserts the results are identical, so this
// doubles as a stress harness; exit code 0 only if all outputs match.

#include <CLI11.hpp>
#include <chrono>
#include <iomanip>
#include <iostream>

#include "eudiv/divergence.hpp"

using namespace eudiv;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const char* name, double serial_s, double parallel_s,
            std::uint64_t items, bool identical) {
  std::cout << std::left << std::setw(14) << name << std::right
            << " serial " << std::fixed << std::setprecision(3) << serial_s
            << "s (" << std::setprecision(0) << (items / serial_s)
            << " items/s), parallel " << std::setprecision(3) << parallel_s
            << "s (" << std::setprecision(0) << (items / parallel_s)
            << " items/s), speedup " << std::setprecision(2)
            << (serial_s / parallel_s) << "x, identical: "
            << (identical ? "yes" : "NO") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kernel benchmarks: OpenMP worklists vs serial reference"};
  std::uint64_t n_max = 3000;
  std::uint64_t budget = 20000;
  std::uint64_t k_in = 2;
  app.add_option("--n-max", n_max, "largest program index");
  app.add_option("--budget", budget, "step budget per run");
  app.add_option("--k", k_in, "machine input");
  CLI11_PARSE(app, argc, argv);

  const Nat k = nat(k_in);
  const Evidence evidence{{Nat(0), Nat(0)}, {Nat(1), Nat(1)}};
  const UtilitySpec utility = make_utility("UNBOUNDED_ID");
  bool all_ok = true;

  {
    auto t0 = Clock::now();
    EvalTable serial = evaluate_range_serial(k, n_max, budget);
    double ts = seconds_since(t0);
    auto t1 = Clock::now();
    EvalTable parallel = evaluate_range(k, n_max, budget);
    double tp = seconds_since(t1);
    bool same = serial == parallel;
    all_ok = all_ok && same;
    report("eval_table", ts, tp, n_max + 1, same);
  }

  {
    auto t0 = Clock::now();
    PartialSumTrace serial =
        partial_sums_serial(evidence, k, utility, n_max, budget);
    double ts = seconds_since(t0);
    auto t1 = Clock::now();
    PartialSumTrace parallel = partial_sums(evidence, k, utility, n_max, budget);
    double tp = seconds_since(t1);
    bool same = serial == parallel;
    all_ok = all_ok && same;
    report("partial_sums", ts, tp, n_max + 1, same);
  }

  {
    // Interpreter fast path vs big-int tracer, same rows one at a time.
    bool same = true;
    auto t0 = Clock::now();
    for (std::uint64_t n = 0; n <= n_max; ++n) {
      volatile bool h = run_reference(decode(nat(n)), k, budget).halted();
      (void)h;
    }
    double ts = seconds_since(t0);
    auto t1 = Clock::now();
    for (std::uint64_t n = 0; n <= n_max; ++n) {
      volatile bool h = run(decode(nat(n)), k, budget).halted();
      (void)h;
    }
    double tp = seconds_since(t1);
    for (std::uint64_t n = 0; n <= n_max; ++n) {
      Program p = decode(nat(n));
      if (run(p, k, budget) != run_reference(p, k, budget)) same = false;
    }
    all_ok = all_ok && same;
    report("interpreter", ts, tp, n_max + 1, same);
  }

  if (!all_ok) {
    std::cerr << "MISMATCH between kernel variants\n";
    return 1;
  }
  return 0;
}

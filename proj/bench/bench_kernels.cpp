// Serial vs OpenMP timings for the parallel kernels. Also checks the two
// paths agree bit for bit.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <omp.h>

#include "uevt/benchmarks.hpp"
#include "uevt/brt.hpp"
#include "uevt/forecaster.hpp"
#include "uevt/synthetic.hpp"

using namespace uevt;

namespace {

template <class F>
double time_ms(F&& f, int reps) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best,
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

void row(const char* name, double serial, double parallel, bool same) {
  std::printf("%-22s %10.2f %10.2f %7.2fx  %s\n", name, serial, parallel,
              serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = 3000;
  if (argc > 1) n = std::strtoul(argv[1], nullptr, 10);
  const auto sim = simulate_garch_t(n, GarchSimParams{}, 7);
  const auto& r = sim.returns;
  std::printf("n = %zu, threads = %d\n", n, omp_get_max_threads());
  std::printf("%-22s %10s %10s %8s\n", "kernel", "serial ms", "omp ms", "speedup");

  {
    std::vector<double> a, b;
    const double ts = time_ms([&] { a = rolling_variance(r.values(), 21, Exec::serial); }, 5);
    const double tp = time_ms([&] { b = rolling_variance(r.values(), 21, Exec::parallel); }, 5);
    row("rolling_variance", ts, tp, same_bits(a, b));
  }
  {
    const std::size_t first = 100, last = std::min<std::size_t>(n - 51, 700);
    BrtSeries a, b;
    const auto tgt = BrtTarget::forward(50);
    const double ts = time_ms([&] { a = realized_brt_range(r, first, last, 100, tgt, 0.95, Exec::serial); }, 1);
    const double tp = time_ms([&] { b = realized_brt_range(r, first, last, 100, tgt, 0.95, Exec::parallel); }, 1);
    std::vector<double> va, vb;
    for (const auto& p : a.points) va.push_back(p.brt);
    for (const auto& p : b.points) vb.push_back(p.brt);
    row("realized_brt_range", ts, tp, same_bits(va, vb));
  }
  {
    VarSeries a, b;
    const auto sub = r.slice(0, std::min<std::size_t>(n, 600));
    const double ts = time_ms([&] { a = var_monte_carlo_gbm(sub, 250, 0.95, 10000, 1, Exec::serial); }, 1);
    const double tp = time_ms([&] { b = var_monte_carlo_gbm(sub, 250, 0.95, 10000, 1, Exec::parallel); }, 1);
    row("var_monte_carlo_gbm", ts, tp, same_bits(a.var_loss, b.var_loss));
  }
  {
    const auto panel = simulate_intraday(sim, 78, 7);
    PipelineConfig pc;
    PipelineResult a, b;
    pc.exec = Exec::serial;
    const double ts = time_ms([&] { a = run_pipeline(r, panel, pc); }, 1);
    pc.exec = Exec::parallel;
    const double tp = time_ms([&] { b = run_pipeline(r, panel, pc); }, 1);
    std::vector<double> va, vb;
    for (const auto& f : a.forecasts) va.push_back(f.var_loss);
    for (const auto& f : b.forecasts) vb.push_back(f.var_loss);
    row("run_pipeline", ts, tp, same_bits(va, vb));
  }
  return 0;
}

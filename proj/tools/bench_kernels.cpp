// Micro-benchmark: serial kernels vs the OpenMP versions on identical data.
// Every pair must agree bit-for-bit (chunked reduction order is fixed), so
// the table carries a max|delta| column that should print as 0.

#include <chrono>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include "lrsolve/kernels.hpp"
#include "lrsolve/rng.hpp"

using lrsolve::Rng;
using lrsolve::kernels::Complex;

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_ms(F&& f, int reps) {
  f();  // warm up
  const auto start = Clock::now();
  for (int r = 0; r < reps; ++r) f();
  const auto stop = Clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

void print_row(const std::string& name, std::size_t n, double serial_ms,
               double omp_ms, double delta) {
  std::printf("%-14s %10zu %12.4f %12.4f %9.2fx %12.3g\n", name.c_str(), n,
              serial_ms, omp_ms, serial_ms / omp_ms, delta);
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = 1 << 22;
  int reps = 20;
  if (argc > 1) n = std::stoull(argv[1]);
  if (argc > 2) reps = std::stoi(argv[2]);

  Rng rng(42);
  std::vector<Complex> a(n), b(n), y1(n), y2(n), out1(n), out2(n);
  std::vector<double> w(n), phase(n), xs(n), h1(n), h2(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    b[i] = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    w[i] = rng.uniform(0, 1);
    phase[i] = rng.uniform(-3, 3);
    xs[i] = rng.uniform(-8, 8);
  }
  std::vector<Complex> coeffs(64);
  for (auto& c : coeffs) c = {rng.uniform(-1, 1), rng.uniform(-1, 1)};

  lrsolve::kernels::set_jobs(0);  // all cores for the omp side
  std::printf("%-14s %10s %12s %12s %10s %12s\n", "kernel", "n", "serial[ms]",
              "omp[ms]", "speedup", "max|delta|");

  {
    Complex r1, r2;
    const double ts = time_ms([&] { r1 = lrsolve::kernels::serial::dot(a, b); }, reps);
    const double tp = time_ms([&] { r2 = lrsolve::kernels::omp::dot(a, b); }, reps);
    print_row("dot", n, ts, tp, std::abs(r1 - r2));
  }
  {
    double r1, r2;
    const double ts = time_ms([&] { r1 = lrsolve::kernels::serial::sumsq(a); }, reps);
    const double tp = time_ms([&] { r2 = lrsolve::kernels::omp::sumsq(a); }, reps);
    print_row("sumsq", n, ts, tp, std::abs(r1 - r2));
  }
  {
    double r1, r2;
    const double ts =
        time_ms([&] { r1 = lrsolve::kernels::serial::weighted_sumsq(w, a); }, reps);
    const double tp =
        time_ms([&] { r2 = lrsolve::kernels::omp::weighted_sumsq(w, a); }, reps);
    print_row("weighted_sumsq", n, ts, tp, std::abs(r1 - r2));
  }
  {
    const double ts = time_ms([&] { lrsolve::kernels::serial::cmul(a, b, out1); }, reps);
    const double tp = time_ms([&] { lrsolve::kernels::omp::cmul(a, b, out2); }, reps);
    double d = 0;
    for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(out1[i] - out2[i]));
    print_row("cmul", n, ts, tp, d);
  }
  {
    y1 = a;
    y2 = a;
    const double ts =
        time_ms([&] { lrsolve::kernels::serial::expi_mul(phase, y1); }, reps);
    const double tp = time_ms([&] { lrsolve::kernels::omp::expi_mul(phase, y2); }, reps);
    double d = 0;
    for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(y1[i] - y2[i]));
    print_row("expi_mul", n, ts, tp, d);
  }
  {
    y1 = b;
    y2 = b;
    const Complex alpha{0.3, -0.7};
    const double ts =
        time_ms([&] { lrsolve::kernels::serial::axpy(alpha, a, y1); }, reps);
    const double tp = time_ms([&] { lrsolve::kernels::omp::axpy(alpha, a, y2); }, reps);
    double d = 0;
    for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(y1[i] - y2[i]));
    print_row("axpy", n, ts, tp, d);
  }
  {
    const double ts =
        time_ms([&] { lrsolve::kernels::serial::hermite_single(40, xs, h1); }, reps);
    const double tp =
        time_ms([&] { lrsolve::kernels::omp::hermite_single(40, xs, h2); }, reps);
    double d = 0;
    for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(h1[i] - h2[i]));
    print_row("hermite_single", n, ts, tp, d);
  }
  {
    const double ts =
        time_ms([&] { lrsolve::kernels::serial::hermite_synth(coeffs, xs, out1); },
                std::max(1, reps / 4));
    const double tp =
        time_ms([&] { lrsolve::kernels::omp::hermite_synth(coeffs, xs, out2); },
                std::max(1, reps / 4));
    double d = 0;
    for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(out1[i] - out2[i]));
    print_row("hermite_synth", n, ts, tp, d);
  }
  return 0;
}

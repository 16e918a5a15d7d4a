#include "lrsolve/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace lrsolve::kernels {

namespace {

int g_jobs = 0;  // 0 = all cores

std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }

void require_same(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernel: size mismatch");
}

Complex dot_chunk(const Complex* a, const Complex* b, std::size_t n) {
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double sumsq_chunk(const Complex* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::norm(a[i]);
  return s;
}

double wsumsq_chunk(const double* w, const Complex* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * std::norm(a[i]);
  return s;
}

// pi^{-1/4}
constexpr double kHermite0 = 0.7511255444649425;

/** Value of the n-th normalized Hermite function at x (stable recurrence). */
double hermite_point(int n, double x) {
  double prev = kHermite0 * std::exp(-0.5 * x * x);
  if (n == 0) return prev;
  double cur = std::sqrt(2.0) * x * prev;
  for (int m = 1; m < n; ++m) {
    const double next =
        std::sqrt(2.0 / (m + 1)) * x * cur - std::sqrt(double(m) / (m + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/** sum_n coeffs[n] h_n(x), advancing the recurrence once per term. */
Complex synth_point(std::span<const Complex> coeffs, double x) {
  if (coeffs.empty()) return {0.0, 0.0};
  double prev = kHermite0 * std::exp(-0.5 * x * x);
  Complex acc = coeffs[0] * prev;
  if (coeffs.size() == 1) return acc;
  double cur = std::sqrt(2.0) * x * prev;
  acc += coeffs[1] * cur;
  for (std::size_t m = 1; m + 1 < coeffs.size(); ++m) {
    const double next =
        std::sqrt(2.0 / double(m + 1)) * x * cur -
        std::sqrt(double(m) / double(m + 1)) * prev;
    prev = cur;
    cur = next;
    acc += coeffs[m + 1] * cur;
  }
  return acc;
}

}  // namespace

void set_jobs(int jobs) {
  if (jobs < 0) throw std::invalid_argument("set_jobs: jobs must be >= 0");
  g_jobs = jobs;
  omp_set_num_threads(jobs == 0 ? omp_get_num_procs() : jobs);
}

int jobs() { return g_jobs; }

namespace serial {

Complex dot(std::span<const Complex> a, std::span<const Complex> b) {
  require_same(a.size(), b.size());
  Complex total{0.0, 0.0};
  for (std::size_t c = 0; c < chunk_count(a.size()); ++c) {
    const std::size_t lo = c * kChunk;
    total += dot_chunk(a.data() + lo, b.data() + lo, std::min(kChunk, a.size() - lo));
  }
  return total;
}

double sumsq(std::span<const Complex> a) {
  double total = 0.0;
  for (std::size_t c = 0; c < chunk_count(a.size()); ++c) {
    const std::size_t lo = c * kChunk;
    total += sumsq_chunk(a.data() + lo, std::min(kChunk, a.size() - lo));
  }
  return total;
}

double weighted_sumsq(std::span<const double> w, std::span<const Complex> a) {
  require_same(w.size(), a.size());
  double total = 0.0;
  for (std::size_t c = 0; c < chunk_count(a.size()); ++c) {
    const std::size_t lo = c * kChunk;
    total += wsumsq_chunk(w.data() + lo, a.data() + lo, std::min(kChunk, a.size() - lo));
  }
  return total;
}

void cmul(std::span<const Complex> a, std::span<const Complex> b,
          std::span<Complex> out) {
  require_same(a.size(), b.size());
  require_same(a.size(), out.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
}

void expi_mul(std::span<const double> phase, std::span<Complex> inout) {
  require_same(phase.size(), inout.size());
  for (std::size_t i = 0; i < inout.size(); ++i)
    inout[i] *= std::polar(1.0, phase[i]);
}

void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
  require_same(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void hermite_single(int n, std::span<const double> x, std::span<double> out) {
  require_same(x.size(), out.size());
  if (n < 0) throw std::invalid_argument("hermite_single: n must be >= 0");
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = hermite_point(n, x[i]);
}

void hermite_synth(std::span<const Complex> coeffs, std::span<const double> x,
                   std::span<Complex> out) {
  require_same(x.size(), out.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = synth_point(coeffs, x[i]);
}

}  // namespace serial

namespace omp {

Complex dot(std::span<const Complex> a, std::span<const Complex> b) {
  require_same(a.size(), b.size());
  const std::size_t nc = chunk_count(a.size());
  std::vector<Complex> partial(nc);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < std::ptrdiff_t(nc); ++c) {
    const std::size_t lo = std::size_t(c) * kChunk;
    partial[c] = dot_chunk(a.data() + lo, b.data() + lo, std::min(kChunk, a.size() - lo));
  }
  Complex total{0.0, 0.0};
  for (const Complex& p : partial) total += p;
  return total;
}

double sumsq(std::span<const Complex> a) {
  const std::size_t nc = chunk_count(a.size());
  std::vector<double> partial(nc);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < std::ptrdiff_t(nc); ++c) {
    const std::size_t lo = std::size_t(c) * kChunk;
    partial[c] = sumsq_chunk(a.data() + lo, std::min(kChunk, a.size() - lo));
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double weighted_sumsq(std::span<const double> w, std::span<const Complex> a) {
  require_same(w.size(), a.size());
  const std::size_t nc = chunk_count(a.size());
  std::vector<double> partial(nc);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < std::ptrdiff_t(nc); ++c) {
    const std::size_t lo = std::size_t(c) * kChunk;
    partial[c] = wsumsq_chunk(w.data() + lo, a.data() + lo, std::min(kChunk, a.size() - lo));
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

void cmul(std::span<const Complex> a, std::span<const Complex> b,
          std::span<Complex> out) {
  require_same(a.size(), b.size());
  require_same(a.size(), out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(a.size()); ++i) out[i] = a[i] * b[i];
}

void expi_mul(std::span<const double> phase, std::span<Complex> inout) {
  require_same(phase.size(), inout.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(inout.size()); ++i)
    inout[i] *= std::polar(1.0, phase[i]);
}

void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
  require_same(x.size(), y.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(x.size()); ++i) y[i] += alpha * x[i];
}

void hermite_single(int n, std::span<const double> x, std::span<double> out) {
  require_same(x.size(), out.size());
  if (n < 0) throw std::invalid_argument("hermite_single: n must be >= 0");
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(x.size()); ++i)
    out[i] = hermite_point(n, x[i]);
}

void hermite_synth(std::span<const Complex> coeffs, std::span<const double> x,
                   std::span<Complex> out) {
  require_same(x.size(), out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(x.size()); ++i)
    out[i] = synth_point(coeffs, x[i]);
}

}  // namespace omp

namespace {
bool use_parallel() { return g_jobs != 1 && omp_get_max_threads() > 1; }
}  // namespace

Complex dot(std::span<const Complex> a, std::span<const Complex> b) {
  return use_parallel() ? omp::dot(a, b) : serial::dot(a, b);
}
double sumsq(std::span<const Complex> a) {
  return use_parallel() ? omp::sumsq(a) : serial::sumsq(a);
}
double weighted_sumsq(std::span<const double> w, std::span<const Complex> a) {
  return use_parallel() ? omp::weighted_sumsq(w, a) : serial::weighted_sumsq(w, a);
}
void cmul(std::span<const Complex> a, std::span<const Complex> b,
          std::span<Complex> out) {
  use_parallel() ? omp::cmul(a, b, out) : serial::cmul(a, b, out);
}
void expi_mul(std::span<const double> phase, std::span<Complex> inout) {
  use_parallel() ? omp::expi_mul(phase, inout) : serial::expi_mul(phase, inout);
}
void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
  use_parallel() ? omp::axpy(alpha, x, y) : serial::axpy(alpha, x, y);
}
void hermite_single(int n, std::span<const double> x, std::span<double> out) {
  use_parallel() ? omp::hermite_single(n, x, out) : serial::hermite_single(n, x, out);
}
void hermite_synth(std::span<const Complex> coeffs, std::span<const double> x,
                   std::span<Complex> out) {
  use_parallel() ? omp::hermite_synth(coeffs, x, out)
                 : serial::hermite_synth(coeffs, x, out);
}

}  // namespace lrsolve::kernels

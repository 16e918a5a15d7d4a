#include "lrsolve/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace lrsolve::fft {

namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

std::mutex g_mutex;
std::map<std::size_t, PlanPair>& plan_cache() {
  static std::map<std::size_t, PlanPair> cache;
  return cache;
}

/**
 * In-place plans created once per size; execution re-targets them onto the
 * caller's buffer via fftw_execute_dft, which is thread-safe.
 * FFTW_UNALIGNED keeps the plan valid for any caller-provided storage.
 */
PlanPair plans_for(std::size_t n) {
  std::lock_guard<std::mutex> lock(g_mutex);
  auto& cache = plan_cache();
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  fftw_complex* buf = fftw_alloc_complex(n);
  if (buf == nullptr) throw std::bad_alloc();
  PlanPair p;
  p.fwd = fftw_plan_dft_1d(int(n), buf, buf, FFTW_FORWARD,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.bwd = fftw_plan_dft_1d(int(n), buf, buf, FFTW_BACKWARD,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  if (p.fwd == nullptr || p.bwd == nullptr)
    throw std::runtime_error("fft: plan creation failed");
  cache.emplace(n, p);
  return p;
}

void run(std::span<const Complex> in, std::span<Complex> out, bool forward_dir) {
  if (in.size() != out.size()) throw std::invalid_argument("fft: size mismatch");
  if (in.empty()) return;
  if (in.size() > std::size_t(1) << 30) throw std::invalid_argument("fft: size too large");

  PlanPair plans = plans_for(in.size());
  if (out.data() != in.data())
    std::copy(in.begin(), in.end(), out.begin());
  auto* raw = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(forward_dir ? plans.fwd : plans.bwd, raw, raw);
}

}  // namespace

void forward(std::span<const Complex> in, std::span<Complex> out) {
  run(in, out, true);
}

void inverse(std::span<const Complex> in, std::span<Complex> out) {
  run(in, out, false);
  const double scale = 1.0 / double(out.size());
  for (Complex& v : out) v *= scale;
}

}  // namespace lrsolve::fft

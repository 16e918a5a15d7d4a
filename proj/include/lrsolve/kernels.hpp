#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace lrsolve::kernels {

using Complex = std::complex<double>;

/**
 * Reductions are accumulated per fixed-size chunk and the partial results are
 * combined in chunk order.  The parallel kernels compute the same partials
 * (each chunk is summed by one thread in index order), so serial and parallel
 * runs produce bit-identical values, not merely close ones.
 */
inline constexpr std::size_t kChunk = 4096;

/** Worker count for the dispatching kernels: 1 = serial, 0 = all cores. */
void set_jobs(int jobs);
int jobs();

namespace serial {

Complex dot(std::span<const Complex> a, std::span<const Complex> b);
double sumsq(std::span<const Complex> a);
double weighted_sumsq(std::span<const double> w, std::span<const Complex> a);
void cmul(std::span<const Complex> a, std::span<const Complex> b,
          std::span<Complex> out);
void expi_mul(std::span<const double> phase, std::span<Complex> inout);
void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y);
void hermite_single(int n, std::span<const double> x, std::span<double> out);
void hermite_synth(std::span<const Complex> coeffs, std::span<const double> x,
                   std::span<Complex> out);

}  // namespace serial

namespace omp {

Complex dot(std::span<const Complex> a, std::span<const Complex> b);
double sumsq(std::span<const Complex> a);
double weighted_sumsq(std::span<const double> w, std::span<const Complex> a);
void cmul(std::span<const Complex> a, std::span<const Complex> b,
          std::span<Complex> out);
void expi_mul(std::span<const double> phase, std::span<Complex> inout);
void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y);
void hermite_single(int n, std::span<const double> x, std::span<double> out);
void hermite_synth(std::span<const Complex> coeffs, std::span<const double> x,
                   std::span<Complex> out);

}  // namespace omp

/** Dispatching front door: serial when jobs() == 1, parallel otherwise. */
Complex dot(std::span<const Complex> a, std::span<const Complex> b);
double sumsq(std::span<const Complex> a);
double weighted_sumsq(std::span<const double> w, std::span<const Complex> a);
void cmul(std::span<const Complex> a, std::span<const Complex> b,
          std::span<Complex> out);
void expi_mul(std::span<const double> phase, std::span<Complex> inout);
void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y);
void hermite_single(int n, std::span<const double> x, std::span<double> out);
void hermite_synth(std::span<const Complex> coeffs, std::span<const double> x,
                   std::span<Complex> out);

}  // namespace lrsolve::kernels

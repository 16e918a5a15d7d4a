#pragma once

#include <complex>
#include <span>

namespace lrsolve::fft {

using Complex = std::complex<double>;

/**
 * Discrete Fourier transform, X_k = sum_j x_j e^{-2 pi i j k / n}.
 * in and out may alias; otherwise they must not overlap.  Plans are cached
 * per size behind a mutex, so concurrent calls from different threads are
 * safe (execution itself never touches the planner).
 */
void forward(std::span<const Complex> in, std::span<Complex> out);

/** Inverse transform including the 1/n factor. */
void inverse(std::span<const Complex> in, std::span<Complex> out);

}  // namespace lrsolve::fft

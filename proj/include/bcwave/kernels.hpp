#pragma once

#include <cstddef>

// Data-parallel inner loops used by the solver and the control engine.
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant selected at runtime.  The two variants are equivalence
// tested; results may differ by roundoff (FMA contraction) only.

namespace bcwave::kernels {

// y[i] += a * x[i]
using AxpyFn = void (*)(double a, const double* x, double* y, std::size_t n);

// sum_i x[i] * y[i]
using DotFn = double (*)(const double* x, const double* y, std::size_t n);

// Leapfrog update over a contiguous span of plain interior nodes:
//   un[i] = 2*u[i] - up[i] + lam*(u[i-1] + u[i+1] + north[i] + south[i] - 4*u[i])
// Caller guarantees u[-1] and u[n] are readable (span is interior to a row).
using WaveRowFn = void (*)(double* un, const double* u, const double* up,
                           const double* north, const double* south,
                           double lam, std::size_t n);

struct Backend {
  AxpyFn axpy;
  DotFn dot;
  WaveRowFn wave_row;
  const char* name;
};

const Backend& scalar_backend();

// Backend chosen at first use: AVX2 when the CPU supports it, unless the
// environment variable BCWAVE_SIMD=scalar overrides.
const Backend& active_backend();

// Force "scalar", "avx2" or "auto".  Returns false if unavailable.
bool force_backend(const char* name);

inline void axpy(double a, const double* x, double* y, std::size_t n) {
  active_backend().axpy(a, x, y, n);
}

inline double dot(const double* x, const double* y, std::size_t n) {
  return active_backend().dot(x, y, n);
}

inline void wave_row(double* un, const double* u, const double* up,
                     const double* north, const double* south,
                     double lam, std::size_t n) {
  active_backend().wave_row(un, u, up, north, south, lam, n);
}

}  // namespace bcwave::kernels

#include "bcwave/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace bcwave::kernels {

#if defined(BCWAVE_BUILD_AVX2)
const Backend* avx2_backend();  // kernels_avx2.cpp
#endif

namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void wave_row_scalar(double* un, const double* u, const double* up,
                     const double* north, const double* south,
                     double lam, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double nb = u[i - 1] + u[i + 1] + north[i] + south[i] - 4.0 * u[i];
    un[i] = 2.0 * u[i] - up[i] + lam * nb;
  }
}

const Backend kScalar{axpy_scalar, dot_scalar, wave_row_scalar, "scalar"};

const Backend* detect() {
#if defined(BCWAVE_BUILD_AVX2)
  if (const char* env = std::getenv("BCWAVE_SIMD"); env && std::strcmp(env, "scalar") == 0)
    return &kScalar;
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return avx2_backend();
#endif
  return &kScalar;
}

std::atomic<const Backend*> g_active{nullptr};

}  // namespace

const Backend& scalar_backend() { return kScalar; }

const Backend& active_backend() {
  const Backend* b = g_active.load(std::memory_order_acquire);
  if (!b) {
    b = detect();
    g_active.store(b, std::memory_order_release);
  }
  return *b;
}

bool force_backend(const char* name) {
  if (std::strcmp(name, "scalar") == 0) {
    g_active.store(&kScalar, std::memory_order_release);
    return true;
  }
#if defined(BCWAVE_BUILD_AVX2)
  if (std::strcmp(name, "avx2") == 0) {
    if (!(__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))) return false;
    g_active.store(avx2_backend(), std::memory_order_release);
    return true;
  }
#endif
  if (std::strcmp(name, "auto") == 0) {
    g_active.store(detect(), std::memory_order_release);
    return true;
  }
  return false;
}

}  // namespace bcwave::kernels

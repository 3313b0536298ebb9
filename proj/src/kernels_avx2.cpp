// AVX2/FMA variants of the hot loops.  This TU is the only one compiled with
// -mavx2 -mfma; entry happens through the dispatch table in kernels.cpp after
// a cpuid check.

#include "bcwave/kernels.hpp"

#include <immintrin.h>

namespace bcwave::kernels {

namespace {

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  __m128d lo = _mm256_castpd256_pd128(acc0);
  __m128d hi = _mm256_extractf128_pd(acc0, 1);
  lo = _mm_add_pd(lo, hi);
  double s = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void wave_row_avx2(double* un, const double* u, const double* up,
                   const double* north, const double* south,
                   double lam, std::size_t n) {
  const __m256d vlam = _mm256_set1_pd(lam);
  const __m256d vtwo = _mm256_set1_pd(2.0);
  const __m256d vfour = _mm256_set1_pd(4.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d uc = _mm256_loadu_pd(u + i);
    __m256d nb = _mm256_add_pd(_mm256_loadu_pd(u + i - 1), _mm256_loadu_pd(u + i + 1));
    nb = _mm256_add_pd(nb, _mm256_loadu_pd(north + i));
    nb = _mm256_add_pd(nb, _mm256_loadu_pd(south + i));
    nb = _mm256_fnmadd_pd(vfour, uc, nb);
    __m256d out = _mm256_fmsub_pd(vtwo, uc, _mm256_loadu_pd(up + i));
    out = _mm256_fmadd_pd(vlam, nb, out);
    _mm256_storeu_pd(un + i, out);
  }
  for (; i < n; ++i) {
    double nb = u[i - 1] + u[i + 1] + north[i] + south[i] - 4.0 * u[i];
    un[i] = 2.0 * u[i] - up[i] + lam * nb;
  }
}

const Backend kAvx2{axpy_avx2, dot_avx2, wave_row_avx2, "avx2"};

}  // namespace

const Backend* avx2_backend() { return &kAvx2; }

}  // namespace bcwave::kernels

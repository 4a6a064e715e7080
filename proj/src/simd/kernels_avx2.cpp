#include <immintrin.h>

#include "lapdde/kernels.hpp"

namespace lapdde::simd {

namespace {

void accumulate_coupling(double* acc, double weight, double w0, const double* r0, double w1, const double* r1,
                         const double* self, std::size_t count) {
  const __m256d vw = _mm256_set1_pd(weight);
  const __m256d v0 = _mm256_set1_pd(w0);
  const __m256d v1 = _mm256_set1_pd(w1);
  std::size_t b = 0;
  for (; b + 4 <= count; b += 4) {
    const __m256d interp = _mm256_add_pd(_mm256_mul_pd(v0, _mm256_loadu_pd(r0 + b)),
                                         _mm256_mul_pd(v1, _mm256_loadu_pd(r1 + b)));
    const __m256d diff = _mm256_sub_pd(interp, _mm256_loadu_pd(self + b));
    _mm256_storeu_pd(acc + b, _mm256_add_pd(_mm256_loadu_pd(acc + b), _mm256_mul_pd(vw, diff)));
  }
  for (; b < count; ++b) acc[b] += weight * ((w0 * r0[b] + w1 * r1[b]) - self[b]);
}

void heun_predict(double* out, const double* x, const double* f1, double dt, double shift, std::size_t count) {
  const __m256d vdt = _mm256_set1_pd(dt);
  const __m256d vs = _mm256_set1_pd(shift);
  std::size_t b = 0;
  for (; b + 4 <= count; b += 4) {
    const __m256d slope = _mm256_add_pd(_mm256_loadu_pd(f1 + b), vs);
    _mm256_storeu_pd(out + b, _mm256_add_pd(_mm256_loadu_pd(x + b), _mm256_mul_pd(vdt, slope)));
  }
  for (; b < count; ++b) out[b] = x[b] + dt * (f1[b] + shift);
}

void heun_correct(double* out, const double* x, const double* f1, const double* f2, double half_dt, double dt,
                  double shift, std::size_t count) {
  const __m256d vh = _mm256_set1_pd(half_dt);
  const __m256d vshift = _mm256_set1_pd(dt * shift);
  std::size_t b = 0;
  for (; b + 4 <= count; b += 4) {
    const __m256d sum = _mm256_add_pd(_mm256_loadu_pd(f1 + b), _mm256_loadu_pd(f2 + b));
    const __m256d avg = _mm256_add_pd(_mm256_loadu_pd(x + b), _mm256_mul_pd(vh, sum));
    _mm256_storeu_pd(out + b, _mm256_add_pd(avg, vshift));
  }
  for (; b < count; ++b) out[b] = (x[b] + half_dt * (f1[b] + f2[b])) + dt * shift;
}

void min_max(const double* v, std::size_t count, double* lo, double* hi) {
  double l = v[0];
  double h = v[0];
  std::size_t b = 0;
  if (count >= 4) {
    __m256d vl = _mm256_loadu_pd(v);
    __m256d vh = vl;
    for (b = 4; b + 4 <= count; b += 4) {
      const __m256d x = _mm256_loadu_pd(v + b);
      vl = _mm256_min_pd(vl, x);
      vh = _mm256_max_pd(vh, x);
    }
    alignas(32) double bl[4];
    alignas(32) double bh[4];
    _mm256_store_pd(bl, vl);
    _mm256_store_pd(bh, vh);
    l = bl[0];
    h = bh[0];
    for (int k = 1; k < 4; ++k) {
      l = bl[k] < l ? bl[k] : l;
      h = bh[k] > h ? bh[k] : h;
    }
  }
  for (; b < count; ++b) {
    l = v[b] < l ? v[b] : l;
    h = v[b] > h ? v[b] : h;
  }
  *lo = l;
  *hi = h;
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const bool supported = __builtin_cpu_supports("avx2");
  static const KernelTable table{"avx2", accumulate_coupling, heun_predict, heun_correct, min_max};
  return supported ? &table : nullptr;
}

}  // namespace lapdde::simd

#include <arm_neon.h>

#include "lapdde/kernels.hpp"

namespace lapdde::simd {

namespace {

void accumulate_coupling(double* acc, double weight, double w0, const double* r0, double w1, const double* r1,
                         const double* self, std::size_t count) {
  const float64x2_t vw = vdupq_n_f64(weight);
  const float64x2_t v0 = vdupq_n_f64(w0);
  const float64x2_t v1 = vdupq_n_f64(w1);
  std::size_t b = 0;
  for (; b + 2 <= count; b += 2) {
    const float64x2_t interp = vaddq_f64(vmulq_f64(v0, vld1q_f64(r0 + b)), vmulq_f64(v1, vld1q_f64(r1 + b)));
    const float64x2_t diff = vsubq_f64(interp, vld1q_f64(self + b));
    vst1q_f64(acc + b, vaddq_f64(vld1q_f64(acc + b), vmulq_f64(vw, diff)));
  }
  for (; b < count; ++b) acc[b] += weight * ((w0 * r0[b] + w1 * r1[b]) - self[b]);
}

void heun_predict(double* out, const double* x, const double* f1, double dt, double shift, std::size_t count) {
  const float64x2_t vdt = vdupq_n_f64(dt);
  const float64x2_t vs = vdupq_n_f64(shift);
  std::size_t b = 0;
  for (; b + 2 <= count; b += 2) {
    vst1q_f64(out + b, vaddq_f64(vld1q_f64(x + b), vmulq_f64(vdt, vaddq_f64(vld1q_f64(f1 + b), vs))));
  }
  for (; b < count; ++b) out[b] = x[b] + dt * (f1[b] + shift);
}

void heun_correct(double* out, const double* x, const double* f1, const double* f2, double half_dt, double dt,
                  double shift, std::size_t count) {
  const float64x2_t vh = vdupq_n_f64(half_dt);
  const float64x2_t vshift = vdupq_n_f64(dt * shift);
  std::size_t b = 0;
  for (; b + 2 <= count; b += 2) {
    const float64x2_t sum = vaddq_f64(vld1q_f64(f1 + b), vld1q_f64(f2 + b));
    vst1q_f64(out + b, vaddq_f64(vaddq_f64(vld1q_f64(x + b), vmulq_f64(vh, sum)), vshift));
  }
  for (; b < count; ++b) out[b] = (x[b] + half_dt * (f1[b] + f2[b])) + dt * shift;
}

void min_max(const double* v, std::size_t count, double* lo, double* hi) {
  double l = v[0];
  double h = v[0];
  for (std::size_t b = 1; b < count; ++b) {
    l = v[b] < l ? v[b] : l;
    h = v[b] > h ? v[b] : h;
  }
  *lo = l;
  *hi = h;
}

}  // namespace

const KernelTable* neon_kernels() {
  static const KernelTable table{"neon", accumulate_coupling, heun_predict, heun_correct, min_max};
  return &table;
}

}  // namespace lapdde::simd

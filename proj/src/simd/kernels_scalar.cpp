#include "lapdde/kernels.hpp"

namespace lapdde::simd {

namespace {

void accumulate_coupling(double* acc, double weight, double w0, const double* r0, double w1, const double* r1,
                         const double* self, std::size_t count) {
  for (std::size_t b = 0; b < count; ++b) acc[b] += weight * ((w0 * r0[b] + w1 * r1[b]) - self[b]);
}

void heun_predict(double* out, const double* x, const double* f1, double dt, double shift, std::size_t count) {
  for (std::size_t b = 0; b < count; ++b) out[b] = x[b] + dt * (f1[b] + shift);
}

void heun_correct(double* out, const double* x, const double* f1, const double* f2, double half_dt, double dt,
                  double shift, std::size_t count) {
  for (std::size_t b = 0; b < count; ++b) out[b] = (x[b] + half_dt * (f1[b] + f2[b])) + dt * shift;
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

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", accumulate_coupling, heun_predict, heun_correct, min_max};
  return table;
}

}  // namespace lapdde::simd

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace lapdde::simd {

// Lane-parallel inner loops of the integrator. Every entry point works on
// `count` contiguous lanes and each lane performs exactly the same sequence
// of IEEE operations as the scalar reference, so all variants agree bit for
// bit (the build disables FMA contraction).
struct KernelTable {
  const char* name;

  // acc[b] += weight * ((w0 * r0[b] + w1 * r1[b]) - self[b])
  void (*accumulate_coupling)(double* acc, double weight, double w0, const double* r0, double w1,
                              const double* r1, const double* self, std::size_t count);

  // out[b] = x[b] + dt * (f1[b] + shift)
  void (*heun_predict)(double* out, const double* x, const double* f1, double dt, double shift,
                       std::size_t count);

  // out[b] = (x[b] + half_dt * (f1[b] + f2[b])) + dt * shift
  void (*heun_correct)(double* out, const double* x, const double* f1, const double* f2, double half_dt,
                       double dt, double shift, std::size_t count);

  // *lo = min(v), *hi = max(v); count >= 1.
  void (*min_max)(const double* v, std::size_t count, double* lo, double* hi);
};

const KernelTable& scalar_kernels();
// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available_kernels();

// Widest supported variant, unless LAPDDE_SIMD names another one
// ("scalar", "avx2", "neon"). Resolved once per process.
const KernelTable& active_kernels();
const KernelTable* find_kernels(std::string_view name);

}  // namespace lapdde::simd

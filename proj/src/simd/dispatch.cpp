#include <cstdlib>
#include <string>

#include "lapdde/error.hpp"
#include "lapdde/kernels.hpp"

namespace lapdde::simd {

#if !defined(LAPDDE_HAVE_AVX2)
const KernelTable* avx2_kernels() { return nullptr; }
#endif
#if !defined(LAPDDE_HAVE_NEON)
const KernelTable* neon_kernels() { return nullptr; }
#endif

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
  if (const auto* t = avx2_kernels()) out.push_back(t);
  if (const auto* t = neon_kernels()) out.push_back(t);
  return out;
}

const KernelTable* find_kernels(std::string_view name) {
  for (const auto* t : available_kernels()) {
    if (name == t->name) return t;
  }
  return nullptr;
}

const KernelTable& active_kernels() {
  static const KernelTable& table = []() -> const KernelTable& {
    if (const char* env = std::getenv("LAPDDE_SIMD"); env != nullptr && *env != '\0') {
      if (const auto* t = find_kernels(env)) return *t;
      throw ValidationError(std::string("LAPDDE_SIMD: kernel variant '") + env + "' is not available");
    }
    return *available_kernels().back();
  }();
  return table;
}

}  // namespace lapdde::simd

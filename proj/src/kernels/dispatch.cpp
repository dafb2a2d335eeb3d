#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace tlab::kernels {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

const Table& scalar_table() { return detail::kScalarTable; }

const Table* avx2_table() {
#if defined(TLAB_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return supported ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const Table& active() {
  static const Table* chosen = [] {
    const char* env = std::getenv("TRAVERSE_LAB_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return &scalar_table();
    const Table* simd = avx2_table();
    return simd != nullptr ? simd : &scalar_table();
  }();
  return *chosen;
}

}  // namespace tlab::kernels

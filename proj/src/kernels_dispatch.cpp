#include <cstdlib>
#include <cstring>

#include "hyst/kernels.hpp"

namespace hyst::kernels {

#if defined(HYST_HAVE_AVX2)
const Table& avx2_table();
#endif

const Table* avx2() {
#if defined(HYST_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok ? &avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const Table& active() {
    static const Table* chosen = [] {
        const char* env = std::getenv("HYST_KERNELS");
        if (env && std::strcmp(env, "scalar") == 0) return &scalar();
        const Table* v = avx2();
        return v ? v : &scalar();
    }();
    return *chosen;
}

}  // namespace hyst::kernels

#include <cstdlib>
#include <string_view>

#include "bfm/kernels.hpp"

namespace bfm::kernels {

const KernelTable* avx2_table();

const KernelTable* avx2() {
#if defined(__x86_64__) || defined(__i386__)
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable* by_name(std::string_view name) {
    if (name == "scalar") return &scalar();
    if (name == "avx2") return avx2();
    return nullptr;
}

const KernelTable& active() {
    static const KernelTable* chosen = [] {
        if (const char* env = std::getenv("BFM_KERNELS")) {
            if (const KernelTable* t = by_name(env)) return t;
        }
        if (const KernelTable* t = avx2()) return t;
        return &scalar();
    }();
    return *chosen;
}

}  // namespace bfm::kernels

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace evacsim::kernels {

bool cpu_supports_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

namespace {

const Ops* pick_default() {
#ifdef EVACSIM_HAVE_AVX2
    if (cpu_supports_avx2()) return &avx2_ops();
#endif
    return &scalar_ops();
}

const Ops* find(std::string_view name) {
    if (name == "scalar" || name == "auto") {
        return name == "auto" ? pick_default() : &scalar_ops();
    }
#ifdef EVACSIM_HAVE_AVX2
    if (name == "avx2" && cpu_supports_avx2()) return &avx2_ops();
#endif
    return nullptr;
}

std::atomic<const Ops*>& slot() {
    static std::atomic<const Ops*> current{[] {
        if (const char* env = std::getenv("EVACSIM_KERNELS")) {
            if (const Ops* ops = find(env)) return ops;
        }
        return pick_default();
    }()};
    return current;
}

}  // namespace

std::vector<const Ops*> available() {
    std::vector<const Ops*> out{&scalar_ops()};
#ifdef EVACSIM_HAVE_AVX2
    if (cpu_supports_avx2()) out.push_back(&avx2_ops());
#endif
    return out;
}

const Ops& active() { return *slot().load(std::memory_order_relaxed); }

bool set_active(std::string_view name) {
    if (const Ops* ops = find(name)) {
        slot().store(ops, std::memory_order_relaxed);
        return true;
    }
    return false;
}

}  // namespace evacsim::kernels

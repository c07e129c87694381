#include <atomic>
#include <cstdlib>
#include <cstring>

#include "hexbend/kernels.hpp"

namespace hexbend::simd {

std::string_view to_string(Isa isa) {
    return isa == Isa::Avx2 ? "avx2" : "scalar";
}

Isa detected_isa() {
#if defined(HEXBEND_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::Avx2;
#endif
    return Isa::Scalar;
}

namespace {

Isa initial_isa() {
    const char* env = std::getenv("HEXBEND_ISA");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
    return detected_isa();
}

std::atomic<Isa>& isa_slot() {
    static std::atomic<Isa> slot{initial_isa()};
    return slot;
}

std::atomic<int> g_threads{1};

}  // namespace

Isa active_isa() { return isa_slot().load(); }

void set_isa(Isa isa) {
    // Never hand out AVX2 code on a CPU without it.
    if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2) isa = Isa::Scalar;
    isa_slot().store(isa);
}

const KernelTable& kernels() {
#if defined(HEXBEND_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) return avx2_kernels();
#endif
    return scalar_kernels();
}

void set_threads(int n) { g_threads.store(n < 1 ? 1 : n); }
int threads() { return g_threads.load(); }

}  // namespace hexbend::simd

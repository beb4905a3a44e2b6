#include "adoptrace/simd/scan.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace adoptrace::simd {

namespace {

constexpr Kernels kScalar{Isa::Scalar, &scalar::find_any, &scalar::find_literal, &scalar::count_byte};
#if defined(__x86_64__) || defined(__i386__)
constexpr Kernels kSse2{Isa::Sse2, &sse2::find_any, &sse2::find_literal, &sse2::count_byte};
constexpr Kernels kAvx2{Isa::Avx2, &avx2::find_any, &avx2::find_literal, &avx2::count_byte};
#endif

bool cpu_supports(Isa isa) noexcept {
    switch (isa) {
    case Isa::Scalar:
        return true;
#if defined(__x86_64__) || defined(__i386__)
    case Isa::Sse2:
        return __builtin_cpu_supports("sse2");
    case Isa::Avx2:
        return __builtin_cpu_supports("avx2");
#else
    case Isa::Sse2:
    case Isa::Avx2:
        return false;
#endif
    }
    return false;
}

std::atomic<const Kernels*>& active_slot() noexcept {
    static std::atomic<const Kernels*> slot{&kernels_for(detect_isa())};
    return slot;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
    switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Sse2: return "sse2";
    case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) noexcept {
    if (name == "scalar") return Isa::Scalar;
    if (name == "sse2") return Isa::Sse2;
    if (name == "avx2") return Isa::Avx2;
    return std::nullopt;
}

const Kernels& kernels_for(Isa isa) {
    if (!cpu_supports(isa)) {
        throw std::invalid_argument("ISA not supported on this CPU: " + std::string(to_string(isa)));
    }
    switch (isa) {
#if defined(__x86_64__) || defined(__i386__)
    case Isa::Sse2: return kSse2;
    case Isa::Avx2: return kAvx2;
#endif
    default: return kScalar;
    }
}

std::vector<Isa> supported_isas() {
    std::vector<Isa> out;
    for (Isa isa : {Isa::Scalar, Isa::Sse2, Isa::Avx2}) {
        if (cpu_supports(isa)) out.push_back(isa);
    }
    return out;
}

Isa detect_isa() {
    if (const char* env = std::getenv("ADOPTRACE_ISA"); env != nullptr) {
        if (auto isa = parse_isa(env); isa && cpu_supports(*isa)) return *isa;
    }
    if (cpu_supports(Isa::Avx2)) return Isa::Avx2;
    if (cpu_supports(Isa::Sse2)) return Isa::Sse2;
    return Isa::Scalar;
}

const Kernels& active() noexcept { return *active_slot().load(std::memory_order_acquire); }

void set_active_isa(Isa isa) { active_slot().store(&kernels_for(isa), std::memory_order_release); }

}  // namespace adoptrace::simd

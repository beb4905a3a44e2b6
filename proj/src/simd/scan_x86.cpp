#include "adoptrace/simd/scan.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <bit>
#include <cstdint>
#include <cstring>

// Functions carry target attributes instead of per-file -mavx2 so that no
// inline code from shared headers gets compiled for AVX2 by accident.

namespace adoptrace::simd {

namespace sse2 {

std::size_t find_any(std::string_view hay, std::size_t from, ByteSet set) noexcept {
    const char* p = hay.data();
    const std::size_t n = hay.size();
    std::size_t i = from;
    const __m128i s0 = _mm_set1_epi8(set.c[0]);
    const __m128i s1 = _mm_set1_epi8(set.c[1]);
    const __m128i s2 = _mm_set1_epi8(set.c[2]);
    const __m128i s3 = _mm_set1_epi8(set.c[3]);
    for (; i + 16 <= n; i += 16) {
        const __m128i v = _mm_loadu_si128(reinterpret_cast<const __m128i*>(p + i));
        const __m128i hit = _mm_or_si128(_mm_or_si128(_mm_cmpeq_epi8(v, s0), _mm_cmpeq_epi8(v, s1)),
                                          _mm_or_si128(_mm_cmpeq_epi8(v, s2), _mm_cmpeq_epi8(v, s3)));
        const auto mask = static_cast<std::uint32_t>(_mm_movemask_epi8(hit));
        if (mask != 0) return i + static_cast<std::size_t>(std::countr_zero(mask));
    }
    return scalar::find_any(hay, i, set);
}

std::size_t find_literal(std::string_view hay, std::size_t from, std::string_view needle) noexcept {
    if (from > hay.size()) return npos;
    if (needle.empty()) return from;
    const std::size_t k = needle.size();
    if (k > hay.size() - from) return npos;
    const char* p = hay.data();
    const std::size_t n = hay.size();
    const __m128i first = _mm_set1_epi8(needle.front());
    const __m128i last = _mm_set1_epi8(needle.back());
    std::size_t i = from;
    for (; i + k - 1 + 16 <= n; i += 16) {
        const __m128i a = _mm_loadu_si128(reinterpret_cast<const __m128i*>(p + i));
        const __m128i b = _mm_loadu_si128(reinterpret_cast<const __m128i*>(p + i + k - 1));
        auto mask = static_cast<std::uint32_t>(
            _mm_movemask_epi8(_mm_and_si128(_mm_cmpeq_epi8(a, first), _mm_cmpeq_epi8(b, last))));
        while (mask != 0) {
            const auto bit = static_cast<std::size_t>(std::countr_zero(mask));
            if (std::memcmp(p + i + bit + 1, needle.data() + 1, k > 2 ? k - 2 : 0) == 0) return i + bit;
            mask &= mask - 1;
        }
    }
    return scalar::find_literal(hay, i, needle);
}

std::size_t count_byte(std::string_view hay, char c) noexcept {
    const char* p = hay.data();
    const std::size_t n = hay.size();
    const __m128i needle = _mm_set1_epi8(c);
    std::size_t total = 0;
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        const __m128i v = _mm_loadu_si128(reinterpret_cast<const __m128i*>(p + i));
        total += static_cast<std::size_t>(
            std::popcount(static_cast<std::uint32_t>(_mm_movemask_epi8(_mm_cmpeq_epi8(v, needle)))));
    }
    return total + scalar::count_byte(hay.substr(i), c);
}

}  // namespace sse2

namespace avx2 {

__attribute__((target("avx2"))) std::size_t find_any(std::string_view hay, std::size_t from,
                                                     ByteSet set) noexcept {
    const char* p = hay.data();
    const std::size_t n = hay.size();
    std::size_t i = from;
    const __m256i s0 = _mm256_set1_epi8(set.c[0]);
    const __m256i s1 = _mm256_set1_epi8(set.c[1]);
    const __m256i s2 = _mm256_set1_epi8(set.c[2]);
    const __m256i s3 = _mm256_set1_epi8(set.c[3]);
    for (; i + 32 <= n; i += 32) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
        const __m256i hit =
            _mm256_or_si256(_mm256_or_si256(_mm256_cmpeq_epi8(v, s0), _mm256_cmpeq_epi8(v, s1)),
                            _mm256_or_si256(_mm256_cmpeq_epi8(v, s2), _mm256_cmpeq_epi8(v, s3)));
        const auto mask = static_cast<std::uint32_t>(_mm256_movemask_epi8(hit));
        if (mask != 0) return i + static_cast<std::size_t>(std::countr_zero(mask));
    }
    return sse2::find_any(hay, i, set);
}

__attribute__((target("avx2"))) std::size_t find_literal(std::string_view hay, std::size_t from,
                                                         std::string_view needle) noexcept {
    if (from > hay.size()) return npos;
    if (needle.empty()) return from;
    const std::size_t k = needle.size();
    if (k > hay.size() - from) return npos;
    const char* p = hay.data();
    const std::size_t n = hay.size();
    const __m256i first = _mm256_set1_epi8(needle.front());
    const __m256i last = _mm256_set1_epi8(needle.back());
    std::size_t i = from;
    for (; i + k - 1 + 32 <= n; i += 32) {
        const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
        const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i + k - 1));
        auto mask = static_cast<std::uint32_t>(
            _mm256_movemask_epi8(_mm256_and_si256(_mm256_cmpeq_epi8(a, first), _mm256_cmpeq_epi8(b, last))));
        while (mask != 0) {
            const auto bit = static_cast<std::size_t>(std::countr_zero(mask));
            if (std::memcmp(p + i + bit + 1, needle.data() + 1, k > 2 ? k - 2 : 0) == 0) return i + bit;
            mask &= mask - 1;
        }
    }
    return sse2::find_literal(hay, i, needle);
}

__attribute__((target("avx2"))) std::size_t count_byte(std::string_view hay, char c) noexcept {
    const char* p = hay.data();
    const std::size_t n = hay.size();
    const __m256i needle = _mm256_set1_epi8(c);
    std::size_t total = 0;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
        total += static_cast<std::size_t>(
            std::popcount(static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(v, needle)))));
    }
    return total + sse2::count_byte(hay.substr(i), c);
}

}  // namespace avx2

}  // namespace adoptrace::simd

#endif

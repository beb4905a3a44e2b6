#include "adoptrace/simd/scan.hpp"

namespace adoptrace::simd::scalar {

std::size_t find_any(std::string_view hay, std::size_t from, ByteSet set) noexcept {
    for (std::size_t i = from; i < hay.size(); ++i) {
        if (set.contains(hay[i])) return i;
    }
    return npos;
}

std::size_t find_literal(std::string_view hay, std::size_t from, std::string_view needle) noexcept {
    if (from > hay.size()) return npos;
    if (needle.empty()) return from;
    if (needle.size() > hay.size() - from) return npos;
    const std::size_t last = hay.size() - needle.size();
    for (std::size_t i = from; i <= last; ++i) {
        if (hay.compare(i, needle.size(), needle) == 0) return i;
    }
    return npos;
}

std::size_t count_byte(std::string_view hay, char c) noexcept {
    std::size_t n = 0;
    for (char x : hay) n += (x == c);
    return n;
}

}  // namespace adoptrace::simd::scalar

#pragma once

// Byte-scanning kernels for the ingestion hot path.
//
// Every kernel has a scalar reference implementation and vector variants.
// All variants must return identical results for identical input; the
// active variant is picked once at runtime from CPU features and can be
// forced through `ADOPTRACE_ISA` (scalar|sse2|avx2) or `set_active_isa`.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace adoptrace::simd {

inline constexpr std::size_t npos = std::string_view::npos;

enum class Isa { Scalar, Sse2, Avx2 };

std::string_view to_string(Isa isa) noexcept;
std::optional<Isa> parse_isa(std::string_view name) noexcept;

/// Up to four byte values to search for; unused slots repeat an earlier one.
struct ByteSet {
    char c[4];

    constexpr ByteSet(char a) : c{a, a, a, a} {}
    constexpr ByteSet(char a, char b) : c{a, b, b, b} {}
    constexpr ByteSet(char a, char b, char d) : c{a, b, d, d} {}
    constexpr ByteSet(char a, char b, char d, char e) : c{a, b, d, e} {}

    [[nodiscard]] constexpr bool contains(char x) const noexcept {
        return x == c[0] || x == c[1] || x == c[2] || x == c[3];
    }
};

struct Kernels {
    Isa isa;
    /// Offset of the first byte at or after `from` that is in `set`, or npos.
    std::size_t (*find_any)(std::string_view hay, std::size_t from, ByteSet set) noexcept;
    /// Offset of the first occurrence of `needle` at or after `from`, or npos.
    /// An empty needle matches at `from` (when from <= size).
    std::size_t (*find_literal)(std::string_view hay, std::size_t from, std::string_view needle) noexcept;
    /// Number of bytes equal to `c`.
    std::size_t (*count_byte)(std::string_view hay, char c) noexcept;
};

/// Kernel table for `isa`; throws std::invalid_argument if this CPU cannot run it.
const Kernels& kernels_for(Isa isa);

/// ISAs this CPU can execute, scalar first.
std::vector<Isa> supported_isas();

/// Best ISA for this CPU, honoring `ADOPTRACE_ISA` when set.
Isa detect_isa();

const Kernels& active() noexcept;
void set_active_isa(Isa isa);

// Per-ISA entry points, exposed for equivalence tests.
namespace scalar {
std::size_t find_any(std::string_view hay, std::size_t from, ByteSet set) noexcept;
std::size_t find_literal(std::string_view hay, std::size_t from, std::string_view needle) noexcept;
std::size_t count_byte(std::string_view hay, char c) noexcept;
}  // namespace scalar

#if defined(__x86_64__) || defined(__i386__)
namespace sse2 {
std::size_t find_any(std::string_view hay, std::size_t from, ByteSet set) noexcept;
std::size_t find_literal(std::string_view hay, std::size_t from, std::string_view needle) noexcept;
std::size_t count_byte(std::string_view hay, char c) noexcept;
}  // namespace sse2

namespace avx2 {
std::size_t find_any(std::string_view hay, std::size_t from, ByteSet set) noexcept;
std::size_t find_literal(std::string_view hay, std::size_t from, std::string_view needle) noexcept;
std::size_t count_byte(std::string_view hay, char c) noexcept;
}  // namespace avx2
#endif

}  // namespace adoptrace::simd

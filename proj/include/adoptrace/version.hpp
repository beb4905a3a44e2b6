#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <regex>
#include <string>
#include <string_view>

namespace adoptrace {

/// A major.minor.maintenance release triple.
///
/// `raw` keeps the exact substring the version was parsed from; it does not
/// take part in ordering or equality.
struct Version {
    std::uint32_t major = 0;
    std::uint32_t minor = 0;
    std::uint32_t maintenance = 0;
    std::string raw;

    Version() = default;
    Version(std::uint32_t ma, std::uint32_t mi, std::uint32_t mt, std::string raw_text = {})
        : major(ma), minor(mi), maintenance(mt), raw(std::move(raw_text)) {}

    friend bool operator==(const Version& a, const Version& b) noexcept {
        return a.major == b.major && a.minor == b.minor && a.maintenance == b.maintenance;
    }
    friend std::strong_ordering operator<=>(const Version& a, const Version& b) noexcept {
        if (auto c = a.major <=> b.major; c != 0) return c;
        if (auto c = a.minor <=> b.minor; c != 0) return c;
        return a.maintenance <=> b.maintenance;
    }

    /// Canonical `major.minor.maintenance` text.
    [[nodiscard]] std::string str() const;
};

struct VersionHash {
    std::size_t operator()(const Version& v) const noexcept {
        std::uint64_t h = (std::uint64_t{v.major} << 42) ^ (std::uint64_t{v.minor} << 21) ^ v.maintenance;
        return std::hash<std::uint64_t>{}(h);
    }
};

/// Parses `major.minor.maintenance` (exactly three dot-separated decimal
/// fields). Returns nullopt on anything else.
std::optional<Version> parse_version(std::string_view text);

enum class DowngradeKind { None, MajorDown, MinorDown, MaintenanceDown };

std::string_view to_string(DowngradeKind kind) noexcept;

/// Three-way comparison on (major, minor, maintenance).
std::strong_ordering compare(const Version& a, const Version& b) noexcept;

/// Which component decreased when moving from `from` to `to`.
DowngradeKind classify_transition(const Version& from, const Version& to) noexcept;

inline constexpr std::string_view kDefaultPattern = R"(PHP/[0-9]{1}\.[0-9]{1}\.[0-9]{1,})";

/// A compiled version-extraction expression.
///
/// If the expression has at least three capture groups, groups 1..3 supply
/// the numeric fields. Otherwise the first three digit runs inside the match
/// are used. Construction throws ConfigError for an invalid expression.
///
/// When the expression starts with a plain literal (e.g. `PHP/`) matching is
/// driven by a vectorised substring search and the regex only runs anchored
/// at candidate offsets.
class VersionPattern {
public:
    explicit VersionPattern(std::string_view pattern = kDefaultPattern, bool ignore_case = false,
                            bool prefilter = true);

    /// Version parsed from the first match in `text`, if any.
    [[nodiscard]] std::optional<Version> extract(std::string_view text) const;

    [[nodiscard]] const std::string& source() const noexcept { return source_; }
    [[nodiscard]] bool ignore_case() const noexcept { return ignore_case_; }
    /// Required literal prefix used as prefilter; empty when none applies.
    [[nodiscard]] const std::string& literal_prefix() const noexcept { return prefix_; }

private:
    [[nodiscard]] std::optional<Version> from_match(const std::cmatch& m) const;

    std::string source_;
    bool ignore_case_ = false;
    std::regex re_;
    std::string prefix_;
    bool use_groups_ = false;
};

/// Leading literal text every match of `pattern` must begin with, or empty
/// if that cannot be determined syntactically.
std::string required_literal_prefix(std::string_view pattern);

/// Convenience wrapper: compiles `pattern` and extracts from `header_text`.
std::optional<Version> extract_version(std::string_view header_text,
                                       std::string_view pattern = kDefaultPattern);

}  // namespace adoptrace

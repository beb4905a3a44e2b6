#include "adoptrace/version.hpp"

#include "adoptrace/error.hpp"
#include "adoptrace/simd/scan.hpp"

#include <cctype>
#include <charconv>

namespace adoptrace {

namespace {

bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }

std::optional<std::uint32_t> to_u32(std::string_view digits) noexcept {
    if (digits.empty()) return std::nullopt;
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
    return value;
}

}  // namespace

std::string Version::str() const {
    return std::to_string(major) + '.' + std::to_string(minor) + '.' + std::to_string(maintenance);
}

std::optional<Version> parse_version(std::string_view text) {
    std::uint32_t parts[3];
    std::size_t start = 0;
    for (int k = 0; k < 3; ++k) {
        const std::size_t dot = (k < 2) ? text.find('.', start) : text.size();
        if (dot == std::string_view::npos) return std::nullopt;
        auto field = text.substr(start, dot - start);
        for (char c : field) {
            if (!is_digit(c)) return std::nullopt;
        }
        auto v = to_u32(field);
        if (!v) return std::nullopt;
        parts[k] = *v;
        start = dot + 1;
    }
    return Version{parts[0], parts[1], parts[2], std::string(text)};
}

std::string_view to_string(DowngradeKind kind) noexcept {
    switch (kind) {
    case DowngradeKind::None: return "none";
    case DowngradeKind::MajorDown: return "major";
    case DowngradeKind::MinorDown: return "minor";
    case DowngradeKind::MaintenanceDown: return "maintenance";
    }
    return "none";
}

std::strong_ordering compare(const Version& a, const Version& b) noexcept { return a <=> b; }

DowngradeKind classify_transition(const Version& from, const Version& to) noexcept {
    if (to.major < from.major) return DowngradeKind::MajorDown;
    if (to.major > from.major) return DowngradeKind::None;
    if (to.minor < from.minor) return DowngradeKind::MinorDown;
    if (to.minor > from.minor) return DowngradeKind::None;
    if (to.maintenance < from.maintenance) return DowngradeKind::MaintenanceDown;
    return DowngradeKind::None;
}

std::string required_literal_prefix(std::string_view pattern) {
    if (pattern.find('|') != std::string_view::npos) return {};
    constexpr std::string_view meta = "^$.|?*+()[]{}\\";
    std::string prefix;
    std::size_t i = 0;
    while (i < pattern.size()) {
        char c = pattern[i];
        std::size_t width = 1;
        if (c == '\\') {
            // Escaped punctuation is a literal; escaped letters/digits are classes or assertions.
            if (i + 1 >= pattern.size()) break;
            const char e = pattern[i + 1];
            if (std::isalnum(static_cast<unsigned char>(e))) break;
            c = e;
            width = 2;
        } else if (meta.find(c) != std::string_view::npos) {
            break;
        }
        const std::size_t next = i + width;
        if (next < pattern.size()) {
            const char q = pattern[next];
            if (q == '?' || q == '*' || q == '{') break;
            if (q == '+') {
                prefix.push_back(c);
                break;
            }
        }
        prefix.push_back(c);
        i = next;
    }
    return prefix;
}

VersionPattern::VersionPattern(std::string_view pattern, bool ignore_case, bool prefilter)
    : source_(pattern), ignore_case_(ignore_case) {
    auto flags = std::regex::ECMAScript | std::regex::optimize;
    if (ignore_case) flags |= std::regex::icase;
    try {
        re_ = std::regex(source_, flags);
    } catch (const std::regex_error& e) {
        throw ConfigError("invalid version pattern '" + source_ + "': " + e.what());
    }
    use_groups_ = re_.mark_count() >= 3;
    if (prefilter && !ignore_case) prefix_ = required_literal_prefix(source_);
}

std::optional<Version> VersionPattern::from_match(const std::cmatch& m) const {
    std::uint32_t parts[3];
    if (use_groups_) {
        for (int k = 0; k < 3; ++k) {
            const auto& g = m[k + 1];
            if (!g.matched) return std::nullopt;
            std::string_view digits(g.first, static_cast<std::size_t>(g.length()));
            for (char c : digits) {
                if (!is_digit(c)) return std::nullopt;
            }
            auto v = to_u32(digits);
            if (!v) return std::nullopt;
            parts[k] = *v;
        }
    } else {
        std::string_view text(m[0].first, static_cast<std::size_t>(m[0].length()));
        int found = 0;
        std::size_t i = 0;
        while (found < 3 && i < text.size()) {
            if (!is_digit(text[i])) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < text.size() && is_digit(text[j])) ++j;
            auto v = to_u32(text.substr(i, j - i));
            if (!v) return std::nullopt;
            parts[found++] = *v;
            i = j;
        }
        if (found < 3) return std::nullopt;
    }
    return Version{parts[0], parts[1], parts[2], m[0].str()};
}

std::optional<Version> VersionPattern::extract(std::string_view text) const {
    const char* const begin = text.data();
    const char* const end = text.data() + text.size();
    std::cmatch m;
    if (prefix_.empty()) {
        if (!std::regex_search(begin, end, m, re_)) return std::nullopt;
        return from_match(m);
    }
    const auto& k = simd::active();
    std::size_t pos = k.find_literal(text, 0, prefix_);
    while (pos != simd::npos) {
        auto flags = std::regex_constants::match_continuous;
        if (pos > 0) flags |= std::regex_constants::match_prev_avail;
        if (std::regex_search(begin + pos, end, m, re_, flags)) return from_match(m);
        pos = k.find_literal(text, pos + 1, prefix_);
    }
    return std::nullopt;
}

std::optional<Version> extract_version(std::string_view header_text, std::string_view pattern) {
    return VersionPattern(pattern).extract(header_text);
}

}  // namespace adoptrace

#include "adoptrace/url.hpp"

#include <cctype>

namespace adoptrace {

namespace {

bool is_scheme_char(char c) noexcept {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
}

std::string_view trim(std::string_view s) noexcept {
    auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

}  // namespace

std::optional<std::string> extract_domain(std::string_view url) {
    std::string_view rest = trim(url);

    // scheme = ALPHA *( ALPHA / DIGIT / "+" / "-" / "." ) ":"
    if (const auto colon = rest.find(':');
        colon != std::string_view::npos && colon > 0 && std::isalpha(static_cast<unsigned char>(rest[0]))) {
        bool scheme_ok = true;
        for (std::size_t i = 1; i < colon; ++i) scheme_ok = scheme_ok && is_scheme_char(rest[i]);
        if (scheme_ok) rest.remove_prefix(colon + 1);
    }
    if (!rest.starts_with("//")) return std::nullopt;
    rest.remove_prefix(2);

    auto netloc = rest.substr(0, rest.find_first_of("/?#"));
    if (const auto at = netloc.rfind('@'); at != std::string_view::npos) netloc.remove_prefix(at + 1);
    if (netloc.empty()) return std::nullopt;

    std::string out(netloc);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace adoptrace

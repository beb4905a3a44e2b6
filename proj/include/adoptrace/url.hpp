#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace adoptrace {

/// Lowercased network location (`host[:port]`) of an absolute or
/// scheme-relative URL. User info is dropped; IP literals are kept verbatim.
/// Returns nullopt when the URL has no authority component.
std::optional<std::string> extract_domain(std::string_view url);

}  // namespace adoptrace

#pragma once

#include <string>
#include <string_view>

namespace adoptrace {

/// Copy of `bytes` with every invalid UTF-8 sequence replaced by U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

bool is_valid_utf8(std::string_view bytes) noexcept;

}  // namespace adoptrace

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace falsimeter::csv {

/// Quotes a field when it contains a comma, quote, or line break.
std::string escape(std::string_view field);

/// Splits one RFC 4180 record (no embedded line breaks). Throws
/// ConfigError on an unterminated quote.
std::vector<std::string> parse_line(std::string_view line);

}  // namespace falsimeter::csv

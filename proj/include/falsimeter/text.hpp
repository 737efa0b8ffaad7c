#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace falsimeter::text {

/// Decodes UTF-8. Invalid sequences decode to U+FFFD, one per bad byte.
std::u32string decode_utf8(std::string_view s);

void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(std::u32string_view s);

/// Canonical composition restricted to conjoining Hangul jamo (L V [T] ->
/// precomposed syllable, LV + T -> LVT). Other text passes through.
std::string compose_hangul(std::string_view s);

bool is_ascii_space(char c) noexcept;

/// Collapses runs of ASCII whitespace to one space and trims both ends.
std::string collapse_whitespace(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::string_view trim(std::string_view s) noexcept;

/// printf-style formatting into a std::string.
std::string format(const char* fmt, ...) __attribute__((format(printf, 1, 2)));

/// Fixed-point with `decimals` places; -0 prints as 0.
std::string fixed(double v, int decimals);

/// FNV-1a 64-bit, printed as 16 hex digits.
std::string fnv1a_hex(std::string_view s);

}  // namespace falsimeter::text

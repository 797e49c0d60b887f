#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Small UTF-8 helpers. Case folding and the alphanumeric class cover Latin,
// Greek and Cyrillic letters plus the common punctuation blocks; everything
// else outside ASCII is treated as a word character.
namespace curator::text {

std::u32string decode_utf8(std::string_view in);
std::string encode_utf8(std::u32string_view in);

char32_t fold_case(char32_t cp);
bool is_word_char(char32_t cp);
bool is_space(char32_t cp);

std::string fold_case(std::string_view in);
std::string trim(std::string_view in);

/// Number of code points in a UTF-8 string.
std::size_t length_utf8(std::string_view in);

std::vector<std::string> split(std::string_view in, char sep);
bool starts_with_ci(std::string_view s, std::string_view prefix);

}  // namespace curator::text

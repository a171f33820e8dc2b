#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Minimal UTF-8 helpers. Case mapping covers Latin-1, Latin Extended-A,
// Greek and basic Cyrillic, which is what policy documents in the corpus use.
namespace sdglens::unicode {

// Returns false on overlong forms, surrogates, truncated sequences and code
// points above U+10FFFF.
bool is_valid_utf8(std::string_view text);

// Decodes valid UTF-8. Invalid bytes decode to U+FFFD one byte at a time.
std::vector<char32_t> decode(std::string_view text);
void append_utf8(std::string& out, char32_t cp);
std::string encode(const std::vector<char32_t>& cps);

char32_t to_lower(char32_t cp);
char32_t to_upper(char32_t cp);
bool is_lower_letter(char32_t cp);
bool is_ascii_digit(char32_t cp);
bool is_space(char32_t cp);

// Letters and digits, including non-ASCII letters. Punctuation and symbol
// blocks are excluded.
bool is_word_char(char32_t cp);

std::string fold_case(std::string_view text);

// Whitespace-delimited token count.
std::size_t count_words(std::string_view text);

// Case-folded, whitespace-collapsed, trimmed.
std::string normalize_for_compare(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace sdglens::unicode

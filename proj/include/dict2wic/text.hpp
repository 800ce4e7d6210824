#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 text helpers. All offsets exposed by this header count Unicode
// scalar values, never bytes.
namespace dict2wic::text {

// Unicode NFC normalization. Throws InvalidArgument on malformed UTF-8.
std::string nfc(std::string_view s);
bool is_nfc(std::string_view s);
bool is_valid_utf8(std::string_view s);

// Full Unicode case folding.
std::string casefold(std::string_view s);

// Trims and collapses every run of Unicode whitespace to one ASCII space.
std::string collapse_whitespace(std::string_view s);

// nfc + collapse_whitespace.
std::string normalize(std::string_view s);

// Key used for duplicate detection: normalize + casefold.
std::string dedup_key(std::string_view s);

std::size_t length(std::string_view s);

// Substring by scalar-value offsets [start, end).
std::string substr(std::string_view s, std::size_t start, std::size_t end);

// First `n` scalar values of `s` (all of `s` if shorter).
std::string prefix(std::string_view s, std::size_t n);

struct Token {
  std::string text;
  std::size_t start = 0;  // inclusive
  std::size_t end = 0;    // exclusive
};

// Splits on Unicode whitespace and punctuation; delimiters are dropped.
std::vector<Token> tokenize(std::string_view s);

}  // namespace dict2wic::text

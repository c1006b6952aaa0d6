#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dictaug {

// UTF-8 helpers shared by the corpus loaders, the tokenizer and the tagger.
// Inputs are required to be valid UTF-8; decode_utf8 throws on malformed
// bytes (overlong forms, truncated sequences, surrogates).

bool is_valid_utf8(std::string_view text);

// Throws dictaug::Error naming the byte offset on invalid input.
std::vector<char32_t> decode_utf8(std::string_view text);

void append_utf8(char32_t cp, std::string& out);
std::string encode_utf8(const std::vector<char32_t>& cps);

bool is_space_cp(char32_t cp);

// Letter test covering ASCII and the Latin-1 / Latin Extended-A ranges the
// bundled corpora use. Anything above that is treated as a letter as well,
// so CJK text does not get classified as punctuation.
bool is_letter_cp(char32_t cp);
bool is_digit_cp(char32_t cp);

// Case mapping for ASCII and Latin-1 supplement (enough for EN/FR/DE).
char32_t to_lower_cp(char32_t cp);
char32_t to_upper_cp(char32_t cp);
bool is_lower_cp(char32_t cp);
bool is_upper_cp(char32_t cp);

// Lowercase fold of a UTF-8 string (used by lexicon lookup and the
// case-insensitive coverage mode).
std::string fold_lower(std::string_view text);

// Uppercase the first letter of a UTF-8 token, in place semantics.
std::string capitalize_first(std::string_view token);

// True when the first codepoint is a lowercase letter.
bool starts_lowercase(std::string_view token);

} // namespace dictaug

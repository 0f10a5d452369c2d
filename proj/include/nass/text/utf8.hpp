#pragma once

#include <string>
#include <string_view>

namespace nass::text {

/// Decodes UTF-8 into code points. Throws Error{InvalidEncoding} on malformed
/// sequences, overlong forms, surrogates and truncated input.
std::u32string decode(std::string_view utf8);

std::string encode(std::u32string_view cps);
std::string encode(char32_t cp);

bool is_valid(std::string_view utf8) noexcept;

/// Number of code points; input must be valid UTF-8.
std::size_t length(std::string_view utf8);

inline constexpr char32_t kTatweel = U'\u0640';

/// Arabic short vowels, tanwin, shadda and sukun (U+064B..U+0652).
constexpr bool is_diacritic(char32_t c) noexcept {
  return c >= U'\u064B' && c <= U'\u0652';
}

constexpr bool is_arabic_letter(char32_t c) noexcept {
  return (c >= U'\u0621' && c <= U'\u063A') ||
         (c >= U'\u0641' && c <= U'\u064A') || c == U'\u0671';
}

/// Removes every code point in U+064B..U+0652, leaving the rest in order.
std::string strip_diacritics(std::string_view utf8);
std::u32string strip_diacritics(std::u32string_view cps);

bool is_space(char32_t c) noexcept;

/// Sentence and clause punctuation that the tokenizer emits as standalone
/// tokens (Arabic comma/semicolon/question mark plus ASCII and guillemets).
bool is_punctuation(char32_t c) noexcept;

/// Punctuation that closes a sentence: . ! ? ؟ ؛ ۔
bool is_sentence_final(char32_t c) noexcept;

}  // namespace nass::text

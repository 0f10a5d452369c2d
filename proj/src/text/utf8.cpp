#include "nass/text/utf8.hpp"

#include <unicode/utf8.h>

#include <algorithm>

#include "nass/error.hpp"

namespace nass::text {

std::u32string decode(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto n = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < n) {
    const int32_t at = i;
    UChar32 c;
    U8_NEXT(s, i, n, c);
    if (c < 0) {
      throw Error(ErrorCode::InvalidEncoding,
                  "invalid UTF-8 sequence at byte " + std::to_string(at));
    }
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string encode(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size() * 2);
  for (char32_t c : cps) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t len = 0;
    U8_APPEND_UNSAFE(buf, len, static_cast<UChar32>(c));
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
  }
  return out;
}

std::string encode(char32_t cp) { return encode(std::u32string_view(&cp, 1)); }

bool is_valid(std::string_view utf8) noexcept {
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto n = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < n) {
    UChar32 c;
    U8_NEXT(s, i, n, c);
    if (c < 0) return false;
  }
  return true;
}

std::size_t length(std::string_view utf8) {
  std::size_t count = 0;
  for (char ch : utf8) {
    if ((static_cast<unsigned char>(ch) & 0xC0) != 0x80) ++count;
  }
  return count;
}

std::u32string strip_diacritics(std::u32string_view cps) {
  std::u32string out;
  out.reserve(cps.size());
  std::copy_if(cps.begin(), cps.end(), std::back_inserter(out),
               [](char32_t c) { return !is_diacritic(c); });
  return out;
}

std::string strip_diacritics(std::string_view utf8) {
  return encode(strip_diacritics(decode(utf8)));
}

bool is_space(char32_t c) noexcept {
  switch (c) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\v': case U'\f':
    case U'\u00A0': case U'\u2000': case U'\u2001': case U'\u2002':
    case U'\u2003': case U'\u2009': case U'\u200A': case U'\u202F':
    case U'\u3000':
      return true;
    default:
      return false;
  }
}

bool is_punctuation(char32_t c) noexcept {
  switch (c) {
    case U'\u060C':  // ،
    case U'\u061B':  // ؛
    case U'\u061F':  // ؟
    case U'\u06D4':  // ۔
    case U'\u066A': case U'\u066B': case U'\u066C': case U'\u066D':
    case U'.': case U',': case U';': case U':': case U'!': case U'?':
    case U'"': case U'\'': case U'(': case U')': case U'[': case U']':
    case U'{': case U'}': case U'-': case U'/':
    case U'\u00AB': case U'\u00BB':
    case U'\u2013': case U'\u2014': case U'\u2026':
    case U'\u201C': case U'\u201D':
      return true;
    default:
      return false;
  }
}

bool is_sentence_final(char32_t c) noexcept {
  return c == U'.' || c == U'!' || c == U'?' || c == U'\u061F' ||
         c == U'\u061B' || c == U'\u06D4';
}

}  // namespace nass::text

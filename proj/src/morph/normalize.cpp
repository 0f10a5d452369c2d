#include "nass/morph/normalize.hpp"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "nass/error.hpp"
#include "nass/text/utf8.hpp"

namespace nass::morph {

namespace {

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    throw Error(ErrorCode::InvalidEncoding, "ICU NFC normalizer unavailable");
  }
  return *n;
}

std::u32string nfc_chunk(const icu::Normalizer2& norm, std::u32string_view chunk) {
  icu::UnicodeString in;
  for (char32_t c : chunk) in.append(static_cast<UChar32>(c));
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = norm.normalize(in, status);
  if (U_FAILURE(status)) throw Error(ErrorCode::InvalidEncoding, "NFC normalization failed");
  std::u32string result;
  for (int32_t i = 0; i < out.length();) {
    UChar32 c = out.char32At(i);
    result.push_back(static_cast<char32_t>(c));
    i += U16_LENGTH(c);
  }
  return result;
}

}  // namespace

NormalizedText normalize(std::string_view raw) {
  const std::u32string input = text::decode(raw);

  // Drop tatweel first, remembering where each survivor came from.
  std::u32string kept;
  std::vector<std::size_t> kept_origin;
  kept.reserve(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (input[i] == text::kTatweel) continue;
    kept.push_back(input[i]);
    kept_origin.push_back(i);
  }

  // NFC chunk by chunk between normalization boundaries so every output
  // character can be traced back to a position inside its source chunk.
  const auto& norm = nfc();
  NormalizedText out;
  out.original_length = input.size();
  std::size_t start = 0;
  while (start < kept.size()) {
    std::size_t end = start + 1;
    while (end < kept.size() && !norm.hasBoundaryBefore(static_cast<UChar32>(kept[end]))) ++end;
    const std::u32string piece = nfc_chunk(norm, std::u32string_view(kept).substr(start, end - start));
    for (std::size_t k = 0; k < piece.size(); ++k) {
      out.chars.push_back(piece[k]);
      out.offset_map.push_back(kept_origin[start + std::min(k, end - start - 1)]);
    }
    start = end;
  }
  out.content = text::encode(out.chars);
  return out;
}

std::string strip_diacritics(std::string_view s) { return text::strip_diacritics(s); }

std::vector<RawToken> tokenize(const NormalizedText& t) {
  std::vector<RawToken> tokens;
  const std::u32string& cs = t.chars;
  std::size_t i = 0;
  while (i < cs.size()) {
    if (text::is_space(cs[i])) {
      ++i;
      continue;
    }
    if (text::is_punctuation(cs[i])) {
      tokens.push_back({text::encode(cs[i]), {i, i + 1}, true});
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cs.size() && !text::is_space(cs[j]) && !text::is_punctuation(cs[j])) ++j;
    tokens.push_back({text::encode(std::u32string_view(cs).substr(i, j - i)), {i, j}, false});
    i = j;
  }
  return tokens;
}

std::vector<Grapheme> graphemes(std::u32string_view cps) {
  std::vector<Grapheme> out;
  for (char32_t c : cps) {
    if (text::is_diacritic(c)) {
      if (out.empty()) out.push_back({0, {}});
      out.back().marks.push_back(c);
    } else {
      out.push_back({c, {}});
    }
  }
  return out;
}

std::u32string join(const std::vector<Grapheme>& gs, std::size_t first, std::size_t last) {
  std::u32string out;
  for (std::size_t i = first; i < last && i < gs.size(); ++i) {
    if (gs[i].base != 0) out.push_back(gs[i].base);
    out += gs[i].marks;
  }
  return out;
}

}  // namespace nass::morph

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nass/morph/types.hpp"

namespace nass::morph {

/// NFC-normalizes UTF-8 input and removes tatweel. Diacritics and letter
/// variants (alef/hamza forms) are kept as written.
/// Throws Error{InvalidEncoding}.
NormalizedText normalize(std::string_view raw);

/// Removes the combining marks U+064B..U+0652.
std::string strip_diacritics(std::string_view s);

struct RawToken {
  std::string text;
  CharSpan span;
  bool punctuation = false;

  friend bool operator==(const RawToken&, const RawToken&) = default;
};

/// Whitespace split; each punctuation mark becomes its own token.
std::vector<RawToken> tokenize(const NormalizedText& text);

/// A base character with the combining marks that follow it.
struct Grapheme {
  char32_t base = 0;
  std::u32string marks;

  bool has_mark(char32_t m) const noexcept { return marks.find(m) != std::u32string::npos; }
};

/// Groups code points into graphemes. Marks with no preceding base attach to
/// a grapheme whose base is 0.
std::vector<Grapheme> graphemes(std::u32string_view cps);
std::u32string join(const std::vector<Grapheme>& gs, std::size_t first, std::size_t last);

}  // namespace nass::morph

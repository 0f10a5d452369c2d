#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nass/morph/types.hpp"

namespace nass::morph {

/// One line of the lexicon file.
struct LexEntry {
  std::string bare;
  WordClass word_class = WordClass::Residual;
  std::string subclass;
  std::map<std::string, std::string> features;
  std::vector<std::string> diacritized;
};

/// Word list plus clitic tables.
///
/// File format (UTF-8, tab-separated, '#' starts a comment line):
///
///     bare <TAB> class <TAB> subclass <TAB> features <TAB> diacritized forms
///
/// `features` is `key=value;key=value` (or `-`), diacritized forms are
/// space-separated (or `-`). Directive lines `@proclitics` / `@enclitics`
/// followed by a tab and space-separated clitics replace the default tables.
///
/// Verb lines describe a lexeme by its past 3ms form. Unless the entry carries
/// `fixed` or an explicit person, its regular past, present (`present=` key)
/// and imperative inflections are generated and indexed as well.
class Lexicon {
 public:
  static Lexicon parse(std::string_view tsv);
  static Lexicon load(const std::filesystem::path& path);

  const std::vector<std::string>& proclitics() const noexcept { return proclitics_; }
  const std::vector<std::string>& enclitics() const noexcept { return enclitics_; }
  bool is_proclitic(std::string_view s) const noexcept;
  bool is_enclitic(std::string_view s) const noexcept;

  /// Every reading of a bare stem, entries first in file order, then
  /// generated inflections. Empty when the stem is unknown.
  std::span<const Reading> readings(std::string_view bare) const;
  bool contains(std::string_view bare) const { return !readings(bare).empty(); }

  /// Form-I pattern id recorded for a triliteral past stem, if any.
  std::optional<std::string> attested_pattern(std::string_view root) const;

  /// Citation forms (bare) whose committed reading has this class and
  /// subclass, in file order, without duplicates.
  std::vector<std::string> forms_of(WordClass word_class, std::string_view subclass) const;

  const std::vector<LexEntry>& entries() const noexcept { return entries_; }

 private:
  void index_entry(const LexEntry& entry);
  void add_reading(const std::string& bare, Reading reading);

  std::vector<LexEntry> entries_;
  std::vector<std::string> proclitics_;
  std::vector<std::string> enclitics_;
  std::unordered_map<std::string, std::vector<Reading>> index_;
  std::vector<std::string> citation_order_;
};

/// Verb > Noun > Particle > Residual > Punctuation.
int class_priority(WordClass c) noexcept;

/// Index of the reading that wins the class priority; ties keep the earliest.
std::size_t committed_index(std::span<const Reading> readings) noexcept;

}  // namespace nass::morph

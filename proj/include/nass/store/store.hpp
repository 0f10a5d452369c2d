#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nass/index/index.hpp"
#include "nass/lom/record.hpp"
#include "nass/morph/lexicon.hpp"
#include "nass/morph/types.hpp"

namespace nass::store {

struct TextEntry {
  std::string text_id;
  std::string title;
  std::string body;
  std::string created_at;  ///< UTC, "YYYY-MM-DDTHH:MM:SSZ"

  friend bool operator==(const TextEntry&, const TextEntry&) = default;
};

struct ManifestRow {
  std::string text_id;
  std::string title;
  std::string text_path;  ///< relative to the store root
  std::string lom_path;
  std::string profile_digest;  ///< SHA-256 hex of text bytes, NUL, LOM bytes
  std::string created_at;

  friend bool operator==(const ManifestRow&, const ManifestRow&) = default;
};

/// On disk as `corpus/manifest`:
///
///     #nass-manifest v1
///     next <TAB> 3
///     0001 <TAB> title <TAB> corpus/0001/text.txt <TAB> corpus/0001/lom.xml <TAB> digest <TAB> createdAt
///
/// Titles escape backslash, tab, newline and carriage return as \\ \t \n \r.
struct CorpusManifest {
  std::int64_t next_id = 1;
  std::vector<ManifestRow> entries;

  friend bool operator==(const CorpusManifest&, const CorpusManifest&) = default;
};

std::string format_manifest(const CorpusManifest& m);
/// Throws Error{CorruptStore}.
CorpusManifest parse_manifest(std::string_view s);

/// SHA-256 of text, a NUL byte, then the LOM document; lowercase hex.
std::string content_digest(std::string_view text, std::string_view lom_xml);

/// Everything a search or session needs about one stored text.
struct StoredText {
  TextEntry entry;
  morph::AnnotatedText annotated;
  lom::LomRecord lom;
  index::DocumentModel model;
};

/// Immutable view of the corpus; replaced as a whole after every write.
struct Snapshot {
  std::vector<std::shared_ptr<const StoredText>> texts;  ///< ordered by text id

  const StoredText* find(std::string_view text_id) const;
  std::vector<index::DocumentModel> models() const;
};

struct StoreOptions {
  lom::DifficultyThresholds difficulty;
  /// Returns the creation timestamp; defaults to the system clock.
  std::function<std::string()> clock;
  /// Called after each ingestion step ("text", "lom", "manifest") with the
  /// text id; throwing from it simulates a crash at that point.
  std::function<void(std::string_view step, std::string_view text_id)> fault_hook;
};

/// Directory-backed store:
///
///     <root>/corpus/manifest
///     <root>/corpus/<id>/text.txt
///     <root>/corpus/<id>/lom.xml
///
/// Every file is written to a temporary name and renamed into place, and the
/// manifest is replaced last, so a manifest row never names a missing file.
/// Writers are serialized; readers take a snapshot.
class CorpusStore {
 public:
  /// Creates the layout when missing, verifies digests and analyzes every
  /// stored text. Throws Error{CorruptStore}, Error{StorageFailure}.
  CorpusStore(std::filesystem::path root, std::shared_ptr<const morph::Lexicon> lexicon, StoreOptions options = {});

  /// Throws Error{InvalidEncoding}, Error{EmptyText}, Error{InvalidRecord}
  /// (manual fields fail validation), Error{StorageFailure}.
  std::string add_text(std::string_view title, std::string_view body, const lom::LomRecord& manual = {});

  /// Throws Error{NotFound}, Error{CorruptStore}.
  TextEntry get_text(std::string_view text_id) const;
  lom::LomRecord load_lom(std::string_view text_id) const;
  std::string load_lom_xml(std::string_view text_id) const;
  CorpusManifest list_texts() const;

  /// Re-analyzes every text and rewrites profiles and digests that changed.
  /// Returns the number of models rebuilt. Throws Error{CorruptStore}.
  std::size_t rebuild_index();

  std::shared_ptr<const Snapshot> snapshot() const;

  const std::filesystem::path& root() const noexcept { return root_; }
  const morph::Lexicon& lexicon() const noexcept { return *lexicon_; }

 private:
  ManifestRow row_of(std::string_view text_id) const;
  std::shared_ptr<StoredText> make_stored(const ManifestRow& row, std::string body, lom::LomRecord lom) const;
  void write_manifest(const CorpusManifest& m);
  std::filesystem::path manifest_path() const;

  std::filesystem::path root_;
  std::shared_ptr<const morph::Lexicon> lexicon_;
  StoreOptions options_;
  mutable std::mutex write_mutex_;
  CorpusManifest manifest_;  ///< guarded by write_mutex_
  std::shared_ptr<const Snapshot> snapshot_;  ///< accessed through std::atomic_load/store
};

/// Zero-padded four-digit id ("0001"); wider when the number needs it.
std::string format_text_id(std::int64_t n);

}  // namespace nass::store

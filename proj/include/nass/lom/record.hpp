#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nass/profile.hpp"

namespace nass::lom {

inline constexpr std::string_view kLomNamespace = "http://ltsc.ieee.org/xsd/LOM";
inline constexpr std::string_view kProfileNamespace = "urn:nass:grammatical-profile:1";
inline constexpr std::string_view kVocabularySource = "LOMv1.0";
inline constexpr std::string_view kIdentifierCatalog = "nass";

struct General {
  std::optional<std::string> identifier;
  std::optional<std::string> title;
  std::optional<std::string> language;

  friend bool operator==(const General&, const General&) = default;
};

/// LOM category 5. Vocabulary fields hold the raw value so that a record
/// read from disk can carry an out-of-vocabulary value until validate()
/// reports it.
struct EducationalCategory {
  std::optional<std::string> interactivity_type;
  std::optional<std::string> learning_resource_type;
  std::optional<std::string> interactivity_level;
  std::optional<std::string> semantic_density;
  std::optional<std::string> intended_end_user_role;
  std::optional<std::string> context;
  std::optional<std::string> typical_age_range;
  std::optional<std::string> difficulty;
  std::optional<std::int64_t> typical_learning_time;  ///< seconds
  std::optional<GrammaticalProfile> description;
  std::optional<std::string> language;

  bool empty() const;
  friend bool operator==(const EducationalCategory&, const EducationalCategory&) = default;
};

/// A category this model does not type, kept as the exact bytes of its element.
struct OpaqueCategory {
  std::string name;  ///< local element name, e.g. "lifeCycle"
  std::string xml;

  friend bool operator==(const OpaqueCategory&, const OpaqueCategory&) = default;
};

struct ValidationIssue {
  std::string path;
  std::string code;
  std::string message;

  friend bool operator==(const ValidationIssue&, const ValidationIssue&) = default;
};

struct ValidationReport {
  bool valid = true;
  std::vector<ValidationIssue> issues;
};

struct LomRecord {
  General general;
  EducationalCategory educational;
  std::vector<OpaqueCategory> other_categories;
  /// Problems found by parseXml inside modeled categories (unknown or
  /// repeated elements, unreadable numbers). Never serialized.
  std::vector<ValidationIssue> parse_issues;

  friend bool operator==(const LomRecord&, const LomRecord&) = default;
};

namespace vocab {
const std::vector<std::string_view>& interactivity_type();
const std::vector<std::string_view>& learning_resource_type();
const std::vector<std::string_view>& five_scale();
const std::vector<std::string_view>& end_user_role();
const std::vector<std::string_view>& context();
/// Ordered from "very easy" to "very difficult".
const std::vector<std::string_view>& difficulty();

/// Position on the difficulty scale, or -1.
int difficulty_rank(std::string_view value) noexcept;
}  // namespace vocab

LomRecord empty_record();

/// Count of populated leaf fields (a profile counts as one).
std::size_t populated_field_count(const LomRecord& r);

ValidationReport validate(const LomRecord& r);

/// Issues with the profile counts alone; used by embed_profile.
std::vector<ValidationIssue> validate_profile(const GrammaticalProfile& p, std::string_view path);

/// Deterministic UTF-8 document. Throws Error{InvalidRecord}.
std::string serialize_xml(const LomRecord& r);

/// Throws Error{MalformedXml} or Error{SchemaViolation} (root is not LOM's
/// `lom` element).
LomRecord parse_xml(std::string_view doc);

/// Replaces educational.description. Throws Error{InvalidProfile}.
LomRecord embed_profile(LomRecord r, const GrammaticalProfile& p);
std::optional<GrammaticalProfile> extract_profile(const LomRecord& r);

struct DifficultyThresholds {
  /// At or above either count a difficult text becomes very difficult.
  std::int64_t very_difficult_composites = 12;
  std::int64_t very_difficult_unpatterned_verbs = 12;
};

/// Empty profile: very easy. Composites or verbs with no form-I template:
/// difficult, or very difficult past the thresholds. Otherwise level 2 is
/// medium and level 1 is easy. Monotone in every count.
std::string infer_difficulty(const GrammaticalProfile& p, const DifficultyThresholds& t = {});

/// "PT1H2M3S"; zero is "PT0S".
std::string format_duration(std::int64_t seconds);
/// Accepts P[nD][T[nH][nM][nS]]. Returns nullopt for anything else.
std::optional<std::int64_t> parse_duration(std::string_view iso);

}  // namespace nass::lom

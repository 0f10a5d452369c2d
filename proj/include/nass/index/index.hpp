#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nass/index/feature.hpp"
#include "nass/lom/record.hpp"
#include "nass/morph/types.hpp"
#include "nass/rational.hpp"

namespace nass::index {

/// The teaching situation a search or a student session starts from.
struct PedagogicalContext {
  int level = 1;
  std::string category = "morphology-conjugation";  ///< or "sentence-composition"
  FeatureSelector target_feature;
  std::optional<std::string> difficulty_max;
  std::string role = "teacher";  ///< or "learner"
  std::optional<std::string> age_range;

  friend bool operator==(const PedagogicalContext&, const PedagogicalContext&) = default;
};

/// Throws Error{InvalidContext}. The level must equal the target feature's
/// level; morphology-conjugation goes with level 1 and sentence-composition
/// with levels 2 and 3.
void validate_context(const PedagogicalContext& cp);

using AttributeValue = std::variant<std::int64_t, std::string>;

struct DocumentModel {
  std::string text_id;
  std::string title;
  std::int64_t line_count = 0;
  std::int64_t verb_count = 0;
  /// Profile counts ("verbCount", "verbCountByTense.past", ...), feature
  /// occurrence counts ("feature.verb:past"), and the populated educational
  /// fields ("difficulty", "difficultyRank", "typicalAgeRange", ...).
  std::map<std::string, AttributeValue> attributes;

  friend bool operator==(const DocumentModel&, const DocumentModel&) = default;
};

DocumentModel build_model(const morph::AnnotatedText& a, const lom::LomRecord& r);

/// Attribute key holding the occurrence count of a feature.
std::string feature_attribute(const FeatureSelector& f);

enum class FacetKind { Hard, Soft };
enum class Op { Ge, Le, Eq, Contains };
enum class SoftMeasure { Density, Brevity };

struct Facet {
  FacetKind kind = FacetKind::Hard;
  std::string attribute;
  Op op = Op::Ge;
  AttributeValue value;
  // Soft facets only.
  Rational weight;
  SoftMeasure measure = SoftMeasure::Density;
  Rational target;

  friend bool operator==(const Facet&, const Facet&) = default;
};

struct FacetSet {
  std::vector<Facet> facets;
};

struct IndexOptions {
  std::int64_t min_occurrences = 3;
  Rational density_weight{3, 5};
  Rational brevity_weight{2, 5};
  /// Feature occurrences per line at which the density facet is saturated.
  Rational target_density{1};
  /// Texts at or under this many lines get full brevity satisfaction.
  std::int64_t target_lines = 10;
};

/// Throws Error{InvalidConfig} unless weights are non-negative and sum to 1
/// and targets are positive.
void validate_options(const IndexOptions& o);

/// Hard: feature count >= min_occurrences, difficultyRank <= the rank of
/// difficulty_max (when set), level >= cp.level, lineCount >= 1,
/// typicalAgeRange contains cp.age_range (when set). Soft: feature density
/// and brevity. Throws Error{InvalidContext}.
FacetSet compute_facets(const PedagogicalContext& cp, const IndexOptions& o = {});

/// True when the model satisfies a hard facet's predicate. A missing
/// attribute never satisfies.
bool satisfies(const Facet& f, const DocumentModel& m);

/// Satisfaction in [0,1] of a soft facet.
Rational soft_satisfaction(const Facet& f, const DocumentModel& m);

/// Empty when a hard facet fails, else the weighted sum of soft satisfactions.
std::optional<Rational> similarity(const FacetSet& f, const DocumentModel& m);

struct SearchResult {
  std::string text_id;
  std::string title;
  std::int64_t line_count = 0;
  std::int64_t verb_count = 0;
  Rational verbs_per_line;
  Rational score;
  int rank = 0;

  friend bool operator==(const SearchResult&, const SearchResult&) = default;
};

/// Sorts by verbs per line, highest first, then by ascending text id, and
/// renumbers ranks 1..n. Throws Error{ZeroLines}.
std::vector<SearchResult> rank_by_verb_density(std::vector<SearchResult> results);

std::vector<SearchResult> search(const PedagogicalContext& cp, const std::vector<DocumentModel>& corpus,
                                 const IndexOptions& o = {});

/// "min-max" in whole years.
std::optional<std::pair<int, int>> parse_age_range(std::string_view s);

}  // namespace nass::index

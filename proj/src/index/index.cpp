#include "nass/index/index.hpp"

#include <algorithm>
#include <charconv>

#include "nass/error.hpp"

namespace nass::index {

std::optional<std::pair<int, int>> parse_age_range(std::string_view s) {
  auto dash = s.find('-');
  if (dash == std::string_view::npos) return std::nullopt;
  auto num = [](std::string_view p) -> std::optional<int> {
    int v = 0;
    if (p.empty()) return std::nullopt;
    auto [end, ec] = std::from_chars(p.data(), p.data() + p.size(), v);
    if (ec != std::errc{} || end != p.data() + p.size() || v < 0) return std::nullopt;
    return v;
  };
  auto lo = num(s.substr(0, dash)), hi = num(s.substr(dash + 1));
  if (!lo || !hi || *lo > *hi) return std::nullopt;
  return std::pair{*lo, *hi};
}

void validate_context(const PedagogicalContext& cp) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidContext, msg); };
  if (cp.level < 1 || cp.level > 3) fail("level must be 1, 2 or 3");
  if (cp.category != "morphology-conjugation" && cp.category != "sentence-composition")
    fail("unknown category \"" + cp.category + "\"");
  if (cp.target_feature.level() != cp.level)
    fail("feature " + cp.target_feature.to_string() + " belongs to level " +
         std::to_string(cp.target_feature.level()) + ", not " + std::to_string(cp.level));
  if ((cp.category == "morphology-conjugation") != (cp.level == 1))
    fail("category " + cp.category + " does not fit level " + std::to_string(cp.level));
  if (cp.difficulty_max && lom::vocab::difficulty_rank(*cp.difficulty_max) < 0)
    fail("unknown difficulty \"" + *cp.difficulty_max + "\"");
  if (cp.role != "teacher" && cp.role != "learner") fail("unknown role \"" + cp.role + "\"");
  if (cp.age_range && !parse_age_range(*cp.age_range)) fail("age range must be \"min-max\"");
}

std::string feature_attribute(const FeatureSelector& f) { return "feature." + f.to_string(); }

DocumentModel build_model(const morph::AnnotatedText& a, const lom::LomRecord& r) {
  DocumentModel m;
  const auto& p = a.profile;
  m.text_id = a.text_id;
  m.title = r.general.title.value_or("");
  m.line_count = p.line_count;
  m.verb_count = p.verb_count;

  auto& at = m.attributes;
  at["lineCount"] = p.line_count;
  at["tokenCount"] = p.token_count;
  at["verbCount"] = p.verb_count;
  at["nounCount"] = p.noun_count;
  at["nominalSentenceCount"] = p.nominal_sentence_count;
  at["verbalSentenceCount"] = p.verbal_sentence_count;
  at["compositeCount"] = p.composite_count();
  at["level"] = std::int64_t{p.level};
  auto flatten = [&](const std::string& prefix, const std::map<std::string, std::int64_t>& counts) {
    for (const auto& [k, v] : counts) at[prefix + "." + k] = v;
  };
  flatten("verbCountByTense", p.verb_count_by_tense);
  flatten("verbCountByPattern", p.verb_count_by_pattern);
  flatten("particleCountBySubclass", p.particle_count_by_subclass);
  flatten("compositeCountByKind", p.composite_count_by_kind);
  for (const auto& [sel, n] : feature_counts(a)) at["feature." + sel] = n;

  const auto& e = r.educational;
  auto put = [&](const char* key, const std::optional<std::string>& v) {
    if (v) at[key] = *v;
  };
  put("interactivityType", e.interactivity_type);
  put("learningResourceType", e.learning_resource_type);
  put("interactivityLevel", e.interactivity_level);
  put("semanticDensity", e.semantic_density);
  put("intendedEndUserRole", e.intended_end_user_role);
  put("context", e.context);
  put("typicalAgeRange", e.typical_age_range);
  put("difficulty", e.difficulty);
  put("language", e.language);
  if (e.difficulty) at["difficultyRank"] = std::int64_t{lom::vocab::difficulty_rank(*e.difficulty)};
  if (e.typical_learning_time) at["typicalLearningTime"] = *e.typical_learning_time;
  return m;
}

void validate_options(const IndexOptions& o) {
  auto fail = [](const char* msg) { throw Error(ErrorCode::InvalidConfig, msg); };
  if (o.min_occurrences < 1) fail("minOccurrences must be at least 1");
  if (o.density_weight < Rational(0) || o.brevity_weight < Rational(0)) fail("facet weights must be non-negative");
  if (o.density_weight + o.brevity_weight != Rational(1)) fail("facet weights must sum to 1");
  if (o.target_density <= Rational(0)) fail("targetDensity must be positive");
  if (o.target_lines < 1) fail("targetLines must be at least 1");
}

FacetSet compute_facets(const PedagogicalContext& cp, const IndexOptions& o) {
  validate_context(cp);
  FacetSet fs;
  auto hard = [&](std::string attr, Op op, AttributeValue v) {
    Facet f;
    f.kind = FacetKind::Hard;
    f.attribute = std::move(attr);
    f.op = op;
    f.value = std::move(v);
    fs.facets.push_back(std::move(f));
  };
  std::string feature = feature_attribute(cp.target_feature);
  hard(feature, Op::Ge, o.min_occurrences);
  if (cp.difficulty_max)
    hard("difficultyRank", Op::Le, std::int64_t{lom::vocab::difficulty_rank(*cp.difficulty_max)});
  hard("level", Op::Ge, std::int64_t{cp.level});
  hard("lineCount", Op::Ge, std::int64_t{1});
  if (cp.age_range) hard("typicalAgeRange", Op::Contains, *cp.age_range);

  Facet density;
  density.kind = FacetKind::Soft;
  density.attribute = feature;
  density.op = Op::Ge;
  density.measure = SoftMeasure::Density;
  density.weight = o.density_weight;
  density.target = o.target_density;
  fs.facets.push_back(density);

  Facet brevity;
  brevity.kind = FacetKind::Soft;
  brevity.attribute = "lineCount";
  brevity.op = Op::Le;
  brevity.measure = SoftMeasure::Brevity;
  brevity.weight = o.brevity_weight;
  brevity.target = Rational(o.target_lines);
  fs.facets.push_back(brevity);
  return fs;
}

namespace {

std::optional<std::int64_t> int_attr(const DocumentModel& m, const std::string& key) {
  auto it = m.attributes.find(key);
  if (it == m.attributes.end()) return std::nullopt;
  if (const auto* v = std::get_if<std::int64_t>(&it->second)) return *v;
  return std::nullopt;
}

}  // namespace

bool satisfies(const Facet& f, const DocumentModel& m) {
  auto it = m.attributes.find(f.attribute);
  if (it == m.attributes.end()) return false;
  const AttributeValue& have = it->second;
  switch (f.op) {
    case Op::Eq:
      return have == f.value;
    case Op::Ge:
    case Op::Le: {
      const auto* a = std::get_if<std::int64_t>(&have);
      const auto* b = std::get_if<std::int64_t>(&f.value);
      if (!a || !b) return false;
      return f.op == Op::Ge ? *a >= *b : *a <= *b;
    }
    case Op::Contains: {
      const auto* a = std::get_if<std::string>(&have);
      const auto* b = std::get_if<std::string>(&f.value);
      if (!a || !b) return false;
      auto outer = parse_age_range(*a), inner = parse_age_range(*b);
      return outer && inner && outer->first <= inner->first && inner->second <= outer->second;
    }
  }
  return false;
}

Rational soft_satisfaction(const Facet& f, const DocumentModel& m) {
  std::int64_t lines = int_attr(m, "lineCount").value_or(0);
  if (f.measure == SoftMeasure::Brevity) {
    Rational observed(std::max<std::int64_t>(lines, 0));
    return f.target / std::max(observed, f.target);
  }
  if (lines <= 0) return Rational(0);
  Rational observed(int_attr(m, f.attribute).value_or(0), lines);
  return std::min(Rational(1), observed / f.target);
}

std::optional<Rational> similarity(const FacetSet& fs, const DocumentModel& m) {
  Rational score(0);
  for (const auto& f : fs.facets) {
    if (f.kind == FacetKind::Hard) {
      if (!satisfies(f, m)) return std::nullopt;
    } else {
      score = score + f.weight * soft_satisfaction(f, m);
    }
  }
  return score;
}

std::vector<SearchResult> rank_by_verb_density(std::vector<SearchResult> results) {
  for (const auto& r : results)
    if (r.line_count <= 0) throw Error(ErrorCode::ZeroLines, "text " + r.text_id + " has no lines");
  std::sort(results.begin(), results.end(), [](const SearchResult& a, const SearchResult& b) {
    Rational ra(a.verb_count, a.line_count), rb(b.verb_count, b.line_count);
    if (ra != rb) return ra > rb;
    return a.text_id < b.text_id;
  });
  for (std::size_t i = 0; i < results.size(); ++i) {
    results[i].verbs_per_line = Rational(results[i].verb_count, results[i].line_count);
    results[i].rank = static_cast<int>(i + 1);
  }
  return results;
}

std::vector<SearchResult> search(const PedagogicalContext& cp, const std::vector<DocumentModel>& corpus,
                                 const IndexOptions& o) {
  FacetSet fs = compute_facets(cp, o);
  std::vector<SearchResult> hits;
  for (const auto& m : corpus) {
    auto score = similarity(fs, m);
    if (!score) continue;
    SearchResult r;
    r.text_id = m.text_id;
    r.title = m.title;
    r.line_count = m.line_count;
    r.verb_count = m.verb_count;
    r.score = *score;
    hits.push_back(std::move(r));
  }
  return rank_by_verb_density(std::move(hits));
}

}  // namespace nass::index

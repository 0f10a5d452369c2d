#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nass/morph/types.hpp"

namespace nass::morph {

enum class DumpFormat { Table, Machine };

/// Token/sentence/composite annotations of a text.
///
/// Machine format: first line `#nass-annotation v1`, then one record per
/// line, tab-separated, record type first and `key=value` fields after it:
/// `text`, then one `token` per token, one `sentence` per sentence, one
/// `composite` per construct. Spans are `begin:end`; clitic lists join with
/// `+`; absent values are empty. See docs/formats.md.
std::string dump_annotations(const AnnotatedText& text, DumpFormat format);

/// Profile as `key=value` lines (`#nass-profile v1` header) or an aligned table.
std::string dump_profile(const GrammaticalProfile& profile, DumpFormat format);

struct DumpRecord {
  std::string type;
  std::map<std::string, std::string> fields;
};

/// Reads machine-format annotation or profile dumps back into records.
/// Profile dumps yield a single record of type "profile".
std::vector<DumpRecord> parse_dump(std::string_view machine);

}  // namespace nass::morph

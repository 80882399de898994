#pragma once

// Line-oriented records: a type word followed by tab-separated key=value
// fields in a fixed order, one record per line.

#include <string>
#include <utility>
#include <vector>

#include "veerfix/fixcount.hpp"

namespace veerfix {

struct Record {
  std::string type;
  std::vector<std::pair<std::string, std::string>> fields;

  const std::string& get(const std::string& key) const;  // throws Parse
  friend bool operator==(const Record&, const Record&) = default;
};

/// Throws Parse if a key or value contains a tab, newline or '='.
std::string format_record(const Record& r);
Record parse_record(const std::string& line);

/// One `fixed` record per point (poly, x, y, kind, index) and a closing
/// `summary` record (total, regular, singular, lefschetz, method).
std::vector<Record> fix_records(const FlatSurface& s, const FixReport& r);
/// Inverse of fix_records for the point data; coordinates are parsed in the
/// field of s.
FixReport parse_fix_records(const FlatSurface& s, const std::vector<Record>& rs);

}  // namespace veerfix

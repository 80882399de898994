#include "veerfix/records.hpp"

#include <sstream>

namespace veerfix {

const std::string& Record::get(const std::string& key) const {
  for (const auto& [k, v] : fields)
    if (k == key) return v;
  fail(ErrorKind::Parse, "record " + type + " has no field " + key);
}

std::string format_record(const Record& r) {
  auto clean = [](const std::string& x, bool key) {
    if (x.find_first_of(key ? "\t\n=" : "\t\n") != std::string::npos)
      fail(ErrorKind::Parse, "record text contains a separator: " + x);
    return x;
  };
  std::string out = clean(r.type, true);
  for (const auto& [k, v] : r.fields) out += "\t" + clean(k, true) + "=" + clean(v, false);
  return out;
}

Record parse_record(const std::string& line) {
  Record r;
  std::stringstream ss(line);
  std::string part;
  bool first = true;
  while (std::getline(ss, part, '\t')) {
    if (first) {
      if (part.empty() || part.find('=') != std::string::npos) fail(ErrorKind::Parse, "record without a type: " + line);
      r.type = part;
      first = false;
      continue;
    }
    auto eq = part.find('=');
    if (eq == std::string::npos || eq == 0) fail(ErrorKind::Parse, "bad record field: " + part);
    r.fields.emplace_back(part.substr(0, eq), part.substr(eq + 1));
  }
  if (first) fail(ErrorKind::Parse, "empty record");
  return r;
}

std::vector<Record> fix_records(const FlatSurface& s, const FixReport& r) {
  std::vector<Record> out;
  for (const auto& p : r.points)
    out.push_back({"fixed",
                   {{"poly", s.polygon_name(p.poly)},
                    {"x", p.p.x.to_string()},
                    {"y", p.p.y.to_string()},
                    {"kind", to_string(p.kind)},
                    {"index", r.indices_known || p.kind == FixKind::Regular ? std::to_string(p.index) : "?"}}});
  out.push_back({"summary",
                 {{"total", std::to_string(r.total)},
                  {"regular", std::to_string(r.regular)},
                  {"singular", std::to_string(r.singular)},
                  {"lefschetz", r.indices_known ? std::to_string(r.lefschetz) : "?"},
                  {"method", r.method}}});
  return out;
}

FixReport parse_fix_records(const FlatSurface& s, const std::vector<Record>& rs) {
  FixReport r;
  r.indices_known = true;
  auto to_int = [](const std::string& x) {
    try {
      std::size_t n = 0;
      int v = std::stoi(x, &n);
      if (n == x.size()) return v;
    } catch (const std::exception&) {
    }
    fail(ErrorKind::Parse, "not an integer: " + x);
  };
  for (const auto& rec : rs) {
    if (rec.type == "fixed") {
      FixedPoint p;
      p.poly = s.polygon_index(rec.get("poly"));
      p.p = {s.field()->parse(rec.get("x")), s.field()->parse(rec.get("y"))};
      const std::string& k = rec.get("kind");
      if (k == to_string(FixKind::Regular))
        p.kind = FixKind::Regular;
      else if (k == to_string(FixKind::Cone))
        p.kind = FixKind::Cone;
      else if (k == to_string(FixKind::Marked))
        p.kind = FixKind::Marked;
      else
        fail(ErrorKind::Parse, "unknown fixed point kind " + k);
      if (rec.get("index") == "?")
        r.indices_known = false;
      else
        p.index = to_int(rec.get("index"));
      p.key = s.canonical({p.poly, p.p});
      (p.kind == FixKind::Regular ? r.regular : r.singular) += 1;
      r.lefschetz += p.index;
      r.points.push_back(std::move(p));
    } else if (rec.type == "summary") {
      r.method = rec.get("method");
      if (to_int(rec.get("total")) != static_cast<int>(r.points.size()))
        fail(ErrorKind::Parse, "summary total disagrees with the listed points");
    } else {
      fail(ErrorKind::Parse, "unexpected record type " + rec.type);
    }
  }
  r.total = static_cast<int>(r.points.size());
  return r;
}

}  // namespace veerfix

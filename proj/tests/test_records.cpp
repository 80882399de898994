#include <cstdio>
#include <sstream>

#include "doctest.h"
#include "veerfix/records.hpp"

using namespace veerfix;

TEST_CASE("records round trip") {
  Record r{"edge", {{"index", "3"}, {"hol_x", "-1/5 + 2/5*g"}, {"empty", ""}}};
  CHECK(parse_record(format_record(r)) == r);
  CHECK_THROWS(format_record({"a=b", {}}));
  CHECK_THROWS(format_record({"a", {{"k", "x\ty"}}}));
  CHECK_THROWS(parse_record(""));
  CHECK_THROWS(parse_record("=x"));
  CHECK_THROWS(parse_record("t\tnovalue"));
  CHECK_THROWS(Record{"t", {}}.get("missing"));
}

TEST_CASE("fixed point records parse back exactly") {
  auto [s, f] = torus_from_matrix(2, 1, 1, 1);
  FixReport r = count_fixed_points(f.power(2));
  std::string text;
  for (const auto& rec : fix_records(*s, r)) text += format_record(rec) + "\n";
  std::vector<Record> back;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) back.push_back(parse_record(line));
  FixReport q = parse_fix_records(*s, back);
  REQUIRE(q.total == r.total);
  CHECK(q.regular == r.regular);
  CHECK(q.lefschetz == r.lefschetz);
  CHECK(q.method == r.method);
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    CHECK(q.points[i].key == r.points[i].key);
    CHECK(q.points[i].p == r.points[i].p);
    CHECK(q.points[i].kind == r.points[i].kind);
    CHECK(q.points[i].index == r.points[i].index);
  }
}

#ifdef VEERFIX_CLI
TEST_CASE("command-line records parse back") {
  std::string cmd = std::string(VEERFIX_CLI) + " --format records fix-count " + VEERFIX_DATA_DIR + "/genus2/l_shape.txt";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  CHECK(pclose(p) == 0);
  Document d = read_document(std::string(VEERFIX_DATA_DIR) + "/genus2/l_shape.txt");
  AffineAutomorphism f = AffineAutomorphism::validate(*d.map);
  std::vector<Record> rs;
  std::stringstream ss(out);
  for (std::string line; std::getline(ss, line);) rs.push_back(parse_record(line));
  FixReport q = parse_fix_records(*d.surface, rs);
  FixReport r = count_fixed_points(f);
  REQUIRE(q.total == r.total);
  for (std::size_t i = 0; i < r.points.size(); ++i) CHECK(q.points[i].key == r.points[i].key);
  CHECK(q.lefschetz == -7);
}
#endif

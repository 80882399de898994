#include <fstream>
#include <map>
#include <sstream>

#include "veerfix/flatsurf.hpp"

namespace veerfix {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

class LineParser {
 public:
  LineParser(std::string_view line, int lineno) : s_(line), line_(lineno) {}

  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::Parse, "line " + std::to_string(line_) + ", column " + std::to_string(pos_ + 1) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool peek(std::string_view w) {
    skip_ws();
    return s_.substr(pos_, w.size()) == w;
  }
  void expect(std::string_view w) {
    if (!peek(w)) error("expected '" + std::string(w) + "'");
    pos_ += w.size();
  }
  std::string word() {
    skip_ws();
    std::size_t b = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '-'))
      ++pos_;
    if (b == pos_) error("expected a name");
    return std::string(s_.substr(b, pos_ - b));
  }
  long integer() {
    skip_ws();
    std::size_t b = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (b == pos_) error("expected an integer");
    return std::stol(std::string(s_.substr(b, pos_ - b)));
  }
  /// Text up to (not including) the first of `stops` at bracket depth 0.
  std::string until(std::string_view stops) {
    skip_ws();
    std::size_t b = pos_;
    int depth = 0;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (depth == 0 && stops.find(c) != std::string_view::npos) break;
      if (c == '(' || c == '[') ++depth;
      if (c == ')' || c == ']') --depth;
      ++pos_;
    }
    return std::string(trim(s_.substr(b, pos_ - b)));
  }
  std::string rest() {
    skip_ws();
    std::string r(trim(s_.substr(pos_)));
    pos_ = s_.size();
    return r;
  }
  std::size_t pos() const { return pos_; }

  FieldElement element(const FieldPtr& k, std::string_view stops) {
    std::size_t at = (skip_ws(), pos_);
    std::string t = until(stops);
    if (t.empty()) error("expected a number");
    if (t.find_first_of(".eE") != std::string::npos && t.find('g') == std::string::npos)
      error("floating-point literals are not accepted");
    try {
      return k->parse(t);
    } catch (const Error& e) {
      pos_ = at;
      error(e.what());
    }
  }
  Vec2 point(const FieldPtr& k) {
    expect("(");
    FieldElement x = element(k, ",");
    expect(",");
    FieldElement y = element(k, ")");
    expect(")");
    return {x, y};
  }
  Mat2 matrix(const FieldPtr& k) {
    expect("[");
    expect("[");
    FieldElement a = element(k, ",");
    expect(",");
    FieldElement b = element(k, "]");
    expect("]");
    expect(",");
    expect("[");
    FieldElement c = element(k, ",");
    expect(",");
    FieldElement d = element(k, "]");
    expect("]");
    expect("]");
    return {a, b, c, d};
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  int line_;
};

struct RawPiece {
  int line;
  std::string src, dst;
  Polygon region;
  Vec2 t;
  std::optional<Mat2> D;
};

}  // namespace

Document parse_document(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  enum class Block { None, Field, Surface, Map } block = Block::None;
  std::optional<Polynomial> minpoly;
  std::optional<RationalInterval> root;
  FieldPtr k;
  auto field = [&](const LineParser& lp) -> FieldPtr {
    if (k) return k;
    if (minpoly || root) {
      if (!minpoly || !root) lp.error("[FIELD] needs both minpoly and root");
      k = RealNumberField::create(*minpoly, *root);
    } else {
      k = RealNumberField::rationals();
    }
    return k;
  };
  SurfaceSpec spec;
  std::map<std::string, int> names;
  struct RawGlue {
    int line;
    std::string a, b;
    long ea, eb;
    bool halfturn;
  };
  std::vector<RawGlue> glues;
  std::vector<std::tuple<int, std::string, long>> marks;
  std::optional<FieldElement> lambda;
  std::vector<RawPiece> pieces;
  bool saw_map = false;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    if (trim(line).empty()) continue;
    LineParser lp(line, lineno);
    if (lp.peek("[")) {
      std::string b = lp.rest();
      if (b == "[FIELD]") {
        if (k) lp.error("[FIELD] must come before [SURFACE]");
        block = Block::Field;
      } else if (b == "[SURFACE]") {
        block = Block::Surface;
        spec.field = field(lp);
      } else if (b == "[MAP]") {
        block = Block::Map;
        saw_map = true;
        field(lp);
      } else {
        lp.error("unknown block " + b);
      }
      continue;
    }
    switch (block) {
      case Block::None:
        lp.error("content outside of a block");
      case Block::Field: {
        std::string key = lp.word();
        lp.expect("=");
        if (key == "minpoly") {
          std::size_t at = lp.pos();
          std::string t = lp.rest();
          try {
            minpoly = Polynomial::parse(t, 'x');
          } catch (const Error& e) {
            (void)at;
            lp.error(e.what());
          }
        } else if (key == "root") {
          lp.expect("(");
          std::string lo = lp.until(",");
          lp.expect(",");
          std::string hi = lp.until(")");
          lp.expect(")");
          try {
            root = RationalInterval{parse_rational(lo), parse_rational(hi)};
          } catch (const Error& e) {
            lp.error(e.what());
          }
        } else {
          lp.error("unknown field key " + key);
        }
        if (!lp.at_end()) lp.error("trailing characters");
        break;
      }
      case Block::Surface: {
        std::string kw = lp.word();
        if (kw == "polygon") {
          std::string name = lp.word();
          lp.expect("=");
          Polygon p;
          while (!lp.at_end()) p.push_back(lp.point(k));
          if (names.count(name)) lp.error("duplicate polygon " + name);
          names[name] = static_cast<int>(spec.polygons.size());
          spec.polygons.push_back({name, std::move(p)});
        } else if (kw == "glue") {
          RawGlue g{lineno, "", "", 0, 0, false};
          g.a = lp.word();
          lp.expect(".");
          g.ea = lp.integer();
          g.b = lp.word();
          lp.expect(".");
          g.eb = lp.integer();
          std::string kind = lp.word();
          if (kind == "halfturn")
            g.halfturn = true;
          else if (kind != "translation")
            lp.error("gluing must be 'translation' or 'halfturn'");
          if (!lp.at_end()) lp.error("trailing characters");
          glues.push_back(g);
        } else if (kw == "mark") {
          std::string name = lp.word();
          lp.expect(".");
          long v = lp.integer();
          if (!lp.at_end()) lp.error("trailing characters");
          marks.emplace_back(lineno, name, v);
        } else {
          lp.error("unknown surface statement " + kw);
        }
        break;
      }
      case Block::Map: {
        if (lp.peek("piece")) {
          lp.expect("piece");
          RawPiece rp;
          rp.line = lineno;
          rp.src = lp.word();
          lp.expect(":");
          lp.expect("(");
          while (!lp.peek(")")) rp.region.push_back(lp.point(k));
          lp.expect(")");
          lp.expect("->");
          rp.dst = lp.word();
          lp.expect("+");
          rp.t = lp.point(k);
          if (lp.peek("derivative")) {
            lp.expect("derivative");
            lp.expect("=");
            rp.D = lp.matrix(k);
          }
          if (!lp.at_end()) lp.error("trailing characters");
          pieces.push_back(std::move(rp));
        } else {
          std::string key = lp.word();
          lp.expect("=");
          if (key == "lambda") {
            lambda = lp.element(k, "");
          } else if (key == "derivative") {
            if (pieces.empty()) lp.error("derivative before any piece");
            pieces.back().D = lp.matrix(k);
          } else {
            lp.error("unknown map key " + key);
          }
          if (!lp.at_end()) lp.error("trailing characters");
        }
        break;
      }
    }
  }
  if (spec.polygons.empty()) fail(ErrorKind::Parse, "missing [SURFACE] block");
  auto lookup = [&](int line, const std::string& n) {
    auto it = names.find(n);
    if (it == names.end()) fail(ErrorKind::Parse, "line " + std::to_string(line) + ": unknown polygon " + n);
    return it->second;
  };
  for (const auto& g : glues)
    spec.gluings.push_back({lookup(g.line, g.a), static_cast<int>(g.ea), lookup(g.line, g.b), static_cast<int>(g.eb), g.halfturn});
  for (const auto& [line, n, v] : marks) spec.marks.emplace_back(lookup(line, n), static_cast<int>(v));

  Document doc;
  doc.surface = FlatSurface::validate(spec);
  if (saw_map) {
    std::vector<MapPiece> ps;
    for (auto& rp : pieces) {
      Mat2 D;
      if (rp.D) {
        D = *rp.D;
      } else {
        if (!lambda) fail(ErrorKind::Parse, "line " + std::to_string(rp.line) + ": piece without derivative and no lambda");
        D = Mat2::diag(*lambda, lambda->inverse());
      }
      ps.push_back({lookup(rp.line, rp.src), std::move(rp.region), D, rp.t, lookup(rp.line, rp.dst)});
    }
    doc.map = PiecewiseAffineMap(doc.surface, std::move(ps));
    doc.lambda = lambda;
  }
  return doc;
}

Document read_document(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::Parse, "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_document(ss.str());
}

std::string write_document(const FlatSurface& s, const PiecewiseAffineMap* m, const FieldElement* lambda) {
  std::ostringstream os;
  const FieldPtr& k = s.field();
  if (k->degree() > 1) {
    const auto& r = k->root_interval();
    os << "[FIELD]\nminpoly = " << k->minpoly().to_string('x') << "\nroot = (" << rational_to_string(r.lo) << ", "
       << rational_to_string(r.hi) << ")\n\n";
  }
  auto pt = [](const Vec2& v) { return "(" + v.x.to_string() + ", " + v.y.to_string() + ")"; };
  os << "[SURFACE]\n";
  for (int p = 0; p < s.num_polygons(); ++p) {
    os << "polygon " << s.polygon_name(p) << " =";
    for (const auto& v : s.polygon(p)) os << " " << pt(v);
    os << "\n";
  }
  for (const auto& g : s.spec().gluings)
    os << "glue " << s.polygon_name(g.poly_a) << "." << g.edge_a << " " << s.polygon_name(g.poly_b) << "." << g.edge_b
       << (g.halfturn ? " halfturn" : " translation") << "\n";
  for (const auto& [p, v] : s.spec().marks) os << "mark " << s.polygon_name(p) << "." << v << "\n";
  if (m) {
    os << "\n[MAP]\n";
    std::optional<Mat2> diag;
    if (lambda) {
      os << "lambda = " << lambda->to_string() << "\n";
      diag = Mat2::diag(*lambda, lambda->inverse());
    }
    for (const auto& pc : m->pieces()) {
      os << "piece " << s.polygon_name(pc.src) << " : (";
      for (std::size_t i = 0; i < pc.region.size(); ++i) os << (i ? " " : "") << pt(pc.region[i]);
      os << ") -> " << s.polygon_name(pc.dst) << " + " << pt(pc.t);
      if (!diag || !(pc.D == *diag)) os << " derivative = " << pc.D.to_string();
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace veerfix

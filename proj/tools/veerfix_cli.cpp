// Command-line front end.
//
// Exit codes: 0 success, 2 invalid input, 3 internal cross-check failure.

#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "veerfix/projections.hpp"
#include "veerfix/records.hpp"

using namespace veerfix;

namespace {

struct CrossCheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string format = "text";  // text, csv or records
  int jobs = 1;
  std::string path;
};

struct Loaded {
  Document doc;
  std::optional<AffineAutomorphism> f;
  std::string map_error;  // why the map is not an affine automorphism
};

Loaded load(const std::string& path, bool need_map) {
  Loaded L{read_document(path), std::nullopt, ""};
  if (L.doc.map) {
    try {
      L.f = AffineAutomorphism::validate(*L.doc.map);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Internal) throw;
      L.doc.map->validate();  // still a valid piecewise-affine map?
      L.map_error = e.what();
    }
  }
  if (need_map && !L.doc.map) fail(ErrorKind::DegenerateInput, path + " has no [MAP] block");
  return L;
}

const AffineAutomorphism& need_affine(const Loaded& L) {
  if (!L.f) fail(ErrorKind::NotConstantDerivative, "map is not an affine automorphism: " + L.map_error);
  return *L.f;
}

FieldElement field_number(const FlatSurface& s, const std::string& text) {
  FieldElement x = s.field()->parse(text);
  if (x.sign() <= 0) fail(ErrorKind::DegenerateInput, "bound must be positive: " + text);
  return x;
}

std::pair<int, int> parse_range(const std::string& text) {
  auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      int n = std::stoi(text);
      return {n, n};
    }
    int a = std::stoi(text.substr(0, dots)), b = std::stoi(text.substr(dots + 2));
    if (a <= b) return {a, b};
  } catch (const std::exception&) {
  }
  fail(ErrorKind::DegenerateInput, "bad range " + text + " (expected a..b)");
}

void emit(const RunConfig& cfg, const Record& r) { std::cout << format_record(r) << "\n"; }

std::string hol_text(const Vec2& h) { return "(" + h.x.to_string() + ", " + h.y.to_string() + ")"; }

// ---------------------------------------------------------------------------

int cmd_check(const RunConfig& cfg) {
  Loaded L = load(cfg.path, false);
  const FlatSurface& s = *L.doc.surface;
  int marked = 0;
  std::string angles;
  for (const auto& c : s.cone_points()) {
    if (c.marked) ++marked;
    angles += (angles.empty() ? "" : " ") + std::to_string(c.angle_pi);
  }
  std::string map_kind = !L.doc.map ? "none" : L.f ? "affine" : "piecewise";
  if (cfg.format == "records") {
    Record r{"check",
             {{"polygons", std::to_string(s.num_polygons())},
              {"genus", std::to_string(s.genus())},
              {"euler", std::to_string(s.euler_characteristic())},
              {"cone_angles_pi", angles},
              {"marked", std::to_string(marked)},
              {"map", map_kind}}};
    if (L.f) r.fields.emplace_back("lambda", L.f->lambda().to_string());
    emit(cfg, r);
    return 0;
  }
  std::cout << "surface: " << s.num_polygons() << " polygons, genus " << s.genus() << ", euler characteristic "
            << s.euler_characteristic() << "\n";
  std::cout << "vertices: " << s.cone_points().size() << " (angles / pi: " << angles << "), marked: " << marked << "\n";
  if (L.doc.map) {
    std::cout << "map: " << L.doc.map->pieces().size() << " pieces, " << map_kind;
    if (L.f) std::cout << ", lambda = " << L.f->lambda().to_string() << " ~ " << L.f->lambda().to_double();
    std::cout << "\n";
  }
  std::cout << "ok\n";
  return 0;
}

int cmd_fix_count(const RunConfig& cfg) {
  Loaded L = load(cfg.path, true);
  const FlatSurface& s = *L.doc.surface;
  Section T = complete_to_section(L.doc.surface, {});
  FixReport shown;
  std::string agreement;
  if (L.f) {
    FixReport fl = count_fixed_points(*L.f);
    FixReport orc = oracle_count_fixed_points(*L.f, T);
    bool same = fl.points.size() == orc.points.size();
    for (std::size_t i = 0; same && i < fl.points.size(); ++i) same = fl.points[i].key == orc.points[i].key;
    if (!same)
      throw CrossCheckFailure("fundamental count " + std::to_string(fl.total) + " disagrees with oracle count " +
                              std::to_string(orc.total));
    int lef = lefschetz_number(*L.f);
    if (fl.lefschetz != lef)
      throw CrossCheckFailure("index sum " + std::to_string(fl.lefschetz) + " differs from the Lefschetz number " +
                              std::to_string(lef));
    shown = fl;
    agreement = "fundamental+oracle:agree";
  } else {
    shown = oracle_count_fixed_points(*L.doc.map, T);
    agreement = "oracle";
  }
  std::string lef = shown.indices_known ? std::to_string(shown.lefschetz) : "?";
  if (cfg.format == "records") {
    for (const auto& r : fix_records(s, shown)) emit(cfg, r);
    return 0;
  }
  if (cfg.format == "csv") {
    std::cout << "poly,x,y,kind,index\n";
    for (const auto& p : shown.points)
      std::cout << s.polygon_name(p.poly) << ",\"" << p.p.x.to_string() << "\",\"" << p.p.y.to_string() << "\","
                << to_string(p.kind) << "," << (shown.indices_known || p.kind == FixKind::Regular ? std::to_string(p.index) : "?")
                << "\n";
    return 0;
  }
  for (const auto& p : shown.points)
    std::cout << "  " << s.polygon_name(p.poly) << " " << hol_text(p.p) << " " << to_string(p.kind) << " index "
              << (shown.indices_known || p.kind == FixKind::Regular ? std::to_string(p.index) : "?") << "\n";
  std::cout << "(" << shown.total << ", " << shown.regular << ", " << shown.singular << ", " << lef << ", " << agreement
            << ")\n";
  return 0;
}

void list_edges(const RunConfig& cfg, const FlatSurface& s, const std::vector<VEdge>& es, const std::string& type) {
  if (cfg.format == "csv") std::cout << "index,hol_x,hol_y,start_corner,degree\n";
  for (std::size_t i = 0; i < es.size(); ++i) {
    auto R = is_veering_edge(s, es[i].fwd);
    int degree = R ? R->degree : 0;
    const Vec2& h = es[i].hol();
    if (cfg.format == "records")
      emit(cfg, {type,
                 {{"index", std::to_string(i)},
                  {"hol_x", h.x.to_string()},
                  {"hol_y", h.y.to_string()},
                  {"start_corner", std::to_string(es[i].fwd.start_corner)},
                  {"degree", std::to_string(degree)}}});
    else if (cfg.format == "csv")
      std::cout << i << ",\"" << h.x.to_string() << "\",\"" << h.y.to_string() << "\"," << es[i].fwd.start_corner << ","
                << degree << "\n";
    else
      std::cout << std::setw(4) << i << "  " << hol_text(h) << "  degree " << degree << "\n";
  }
}

struct VeeringFlags {
  std::string edges;
  bool section = false, flips = false, mapping_torus = false;
};

int cmd_veering(const RunConfig& cfg, const VeeringFlags& fl) {
  Loaded L = load(cfg.path, false);
  const SurfacePtr& s = L.doc.surface;
  if (!fl.edges.empty()) {
    FieldElement b = field_number(*s, fl.edges);
    list_edges(cfg, *s, veering_edges_in_box(*s, b, b), "edge");
  }
  if (fl.section) {
    Section T = L.f ? f_section(*L.f, complete_to_section(s, {})) : complete_to_section(s, {});
    if (cfg.format == "text") std::cout << (L.f ? "f-section" : "section") << ": " << T.size() << " edges\n";
    list_edges(cfg, *s, T.edges(), "section_edge");
  }
  if (fl.flips || fl.mapping_torus) {
    const AffineAutomorphism& f = need_affine(L);
    Section T = f_section(f, complete_to_section(s, {}));
    Layering lay = mapping_torus_layering(f, T);
    if (fl.flips) {
      if (cfg.format == "records")
        emit(cfg, {"flips", {{"count", std::to_string(lay.tets.size())}}});
      else
        std::cout << "flips: " << lay.tets.size() << "\n";
      for (std::size_t i = 0; i < lay.tets.size() && cfg.format == "text"; ++i)
        std::cout << "  " << i << ": " << hol_text(lay.tets[i].bottom.hol()) << " -> " << hol_text(lay.tets[i].top.hol())
                  << "\n";
    }
    if (fl.mapping_torus) {
      if (!lay.closed()) throw CrossCheckFailure("layered triangulation has unglued faces");
      if (cfg.format == "records") {
        emit(cfg, {"mapping_torus", {{"tetrahedra", std::to_string(lay.tets.size())}, {"closed", "yes"}}});
      } else {
        std::cout << "tetrahedra: " << lay.tets.size() << "\n";
        std::cout << lay.gluing_table();
        std::cout << "closed: yes\n";
      }
    }
  }
  return 0;
}

int cmd_pocket(const RunConfig& cfg, const std::string& box, int i, int j) {
  Loaded L = load(cfg.path, false);
  const SurfacePtr& s = L.doc.surface;
  FieldElement b = field_number(*s, box);
  auto es = veering_edges_in_box(*s, b, b);
  if (i < 0 || j < 0 || i >= static_cast<int>(es.size()) || j >= static_cast<int>(es.size()))
    fail(ErrorKind::DegenerateInput, "edge index out of range (" + std::to_string(es.size()) + " edges in the box)");
  const VEdge &a = es[i], &c = es[j];
  Pocket P = edge_order(a, c) == Order::Below ? pocket(s, c, a) : pocket(s, a, c);
  long base = intersection_number(a, c);
  long chi = s->punctured_euler_characteristic();
  long factor = 81 * chi * chi;
  bool holds = base <= P.intersection && P.intersection <= factor * base;
  if (!holds) throw CrossCheckFailure("pocket intersection outside the sandwich");
  if (cfg.format == "records") {
    emit(cfg, {"pocket",
               {{"i_sigma", std::to_string(base)},
                {"i_pocket", std::to_string(P.intersection)},
                {"flips", std::to_string(P.flips)},
                {"factor", std::to_string(factor)},
                {"holds", "yes"}}});
    return 0;
  }
  std::cout << "top: " << P.top.size() << " edges, bottom: " << P.bottom.size() << " edges, flips: " << P.flips << "\n";
  std::cout << "i(sigma1, sigma2) = " << base << " <= i(P+, P-) = " << P.intersection << " <= " << factor << " * "
            << base << "\n";
  return 0;
}

Cylinder pick_cylinder(const FlatSurface& s, const std::string& box, int index) {
  auto cyls = cylinders_up_to(s, field_number(s, box));
  if (index < 0 || index >= static_cast<int>(cyls.size()))
    fail(ErrorKind::NotCylinder, "cylinder index out of range (" + std::to_string(cyls.size()) + " cylinders in the box)");
  return cyls[index];
}

int cmd_annular(const RunConfig& cfg, const std::string& box, int index, bool list, int kmax) {
  Loaded L = load(cfg.path, false);
  const FlatSurface& s = *L.doc.surface;
  if (list) {
    auto cyls = cylinders_up_to(s, field_number(s, box));
    for (std::size_t i = 0; i < cyls.size(); ++i) {
      if (cfg.format == "records")
        emit(cfg, {"cylinder",
                   {{"index", std::to_string(i)},
                    {"hol_x", cyls[i].hol.x.to_string()},
                    {"hol_y", cyls[i].hol.y.to_string()},
                    {"height", cyls[i].height.to_string()}}});
      else
        std::cout << std::setw(4) << i << "  " << hol_text(cyls[i].hol) << "  height " << cyls[i].height.to_string() << "\n";
    }
    return 0;
  }
  const AffineAutomorphism& f = need_affine(L);
  Cylinder c = pick_cylinder(s, box, index);
  auto minus = lamination_projection(f, c, -1, kmax);
  auto plus = lamination_projection(f, c, +1, kmax);
  ProjectionEstimate d = lamination_distance(f, c, kmax);
  if (cfg.format == "records") {
    for (const auto* p : {&minus, &plus})
      emit(cfg, {"projection",
                 {{"sign", p == &minus ? "-" : "+"},
                  {"slope", p->arc.slope.to_string()},
                  {"entry", p->arc.entry.to_string()},
                  {"winding", std::to_string(p->arc.winding)},
                  {"iterations", std::to_string(p->iterations)}}});
    emit(cfg, {"annular", {{"distance", std::to_string(d.value)}, {"status", to_string(d.status)}}});
    return 0;
  }
  std::cout << "cylinder " << hol_text(c.hol) << " height " << c.height.to_string() << "\n";
  for (const auto* p : {&minus, &plus})
    std::cout << "lambda" << (p == &minus ? "-" : "+") << ": slope " << p->arc.slope.to_string() << " ~ "
              << p->arc.slope.to_double() << ", entry " << p->arc.entry.to_double() << ", winding " << p->arc.winding
              << ", stabilized after " << p->iterations << " iterates\n";
  std::cout << "d(lambda+, lambda-) = " << d.value << " (" << to_string(d.status) << ")\n";
  return 0;
}

int cmd_witness(const RunConfig& cfg, const std::string& bound) {
  Loaded L = load(cfg.path, true);
  const AffineAutomorphism& f = need_affine(L);
  auto w = irreducibility_witness_search(f, field_number(*L.doc.surface, bound));
  if (cfg.format == "records") {
    Record r{"witness", {{"status", w ? "found" : "none_found"}, {"bound", bound}}};
    if (w) {
      r.fields.emplace_back("hol_x", w->hol.x.to_string());
      r.fields.emplace_back("hol_y", w->hol.y.to_string());
    }
    emit(cfg, r);
  } else if (w) {
    std::cout << "found: cylinder " << hol_text(w->hol) << " with i(alpha, f(alpha)) = 0\n";
  } else {
    std::cout << "none_found(" << bound << ")\n";
  }
  return 0;
}

int cmd_stretch(const RunConfig& cfg, int iters, const std::string& box, int twist_cyl, int n) {
  Loaded L = load(cfg.path, true);
  PiecewiseAffineMap h = *L.doc.map;
  if (twist_cyl >= 0) h = twist_composite(need_affine(L), pick_cylinder(*L.doc.surface, box, twist_cyl), n);
  StretchEstimate e = stretch_estimate(h, iters);
  if (cfg.format == "records") {
    emit(cfg, {"stretch",
               {{"value", std::to_string(e.value)}, {"error", std::to_string(e.error)}, {"iterations", std::to_string(e.iterations)}}});
    return 0;
  }
  std::cout << std::setprecision(10) << "stretch ~ " << e.value << " +- " << e.error << " (" << e.iterations
            << " iterations)\n";
  if (L.f && twist_cyl < 0) std::cout << "lambda = " << L.f->lambda().to_double() << "\n";
  return 0;
}

int cmd_family(const RunConfig& cfg, const std::string& power, const std::string& twist_range, int twist_cyl,
               const std::string& box, int iters) {
  Loaded L = load(cfg.path, true);
  const AffineAutomorphism& f = need_affine(L);
  std::vector<FamilyMember> fam;
  if (!power.empty()) {
    auto [a, b] = parse_range(power);
    if (a < 1) fail(ErrorKind::DegenerateInput, "powers start at 1");
    for (int n = a; n <= b; ++n) {
      AffineAutomorphism g = f.power(n);
      fam.push_back({"f^" + std::to_string(n), g.map(), g, std::nullopt, 0, std::nullopt});
    }
  } else {
    if (twist_cyl < 0) fail(ErrorKind::DegenerateInput, "family needs --power or --twist with --n");
    auto [a, b] = parse_range(twist_range);
    if (a < 0) fail(ErrorKind::DegenerateInput, "twist powers start at 0");
    Cylinder c = pick_cylinder(*L.doc.surface, box, twist_cyl);
    for (int n = a; n <= b; ++n)
      fam.push_back({"f.t^" + std::to_string(n), twist_composite(f, c, n), std::nullopt, c, n, f});
  }
  auto rows = coarse_table(fam, iters);
  std::cout << (cfg.format == "csv" ? table_csv(rows) : table_text(rows));
  if (cfg.format == "text") std::cout << "(annular terms only; nonannular subsurface terms are not computed)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact fixed points, veering triangulations and annular projections of affine pseudo-Anosov maps"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "csv", "records"}));
  app.add_option("--jobs", cfg.jobs, "accepted for compatibility; computation is sequential")->check(CLI::PositiveNumber);

  auto file_arg = [&](CLI::App* sub) {
    sub->add_option("file", cfg.path, "surface file")->required()->check(CLI::ExistingFile);
    sub->fallthrough();
  };

  auto* check = app.add_subcommand("check", "validate a surface file");
  file_arg(check);

  auto* fix = app.add_subcommand("fix-count", "fixed points by both methods, cross-checked");
  file_arg(fix);

  VeeringFlags vf;
  auto* veer = app.add_subcommand("veering", "veering edges, sections, flips and the layered mapping torus");
  file_arg(veer);
  veer->add_option("--edges", vf.edges, "list veering edges with holonomy in the box [-L, L]^2");
  veer->add_flag("--section", vf.section, "an f-section (a section if the file has no affine map)");
  veer->add_flag("--flips", vf.flips, "upward flips from f(T) to T");
  veer->add_flag("--mapping-torus", vf.mapping_torus, "tetrahedra and gluing table");

  std::string box = "2";
  int pi = -1, pj = -1;
  auto* pock = app.add_subcommand("pocket", "pocket between two crossing veering edges");
  file_arg(pock);
  pock->add_option("--box", box, "holonomy box of the edge listing");
  pock->add_option("sigma1", pi, "edge index in `veering --edges`")->required();
  pock->add_option("sigma2", pj, "edge index in `veering --edges`")->required();

  int cyl = -1, kmax = 64;
  bool list = false;
  auto* ann = app.add_subcommand("annular", "stabilized lamination projections to a cylinder");
  file_arg(ann);
  ann->add_option("--box", box, "holonomy box of the cylinder listing");
  ann->add_option("--cyl", cyl, "cylinder index in `annular --list`");
  ann->add_flag("--list", list, "list cylinders in the box");
  ann->add_option("--kmax", kmax, "iteration cap")->check(CLI::PositiveNumber);

  std::string bound = "2";
  auto* wit = app.add_subcommand("witness", "search for a cylinder curve disjoint from its image");
  file_arg(wit);
  wit->add_option("--bound", bound, "holonomy box of the search");

  int iters = 10, tw = -1, n = 0;
  auto* str = app.add_subcommand("stretch", "floating-point growth rate of edge lengths");
  file_arg(str);
  str->add_option("--iters", iters, "iterations")->check(CLI::PositiveNumber);
  str->add_option("--twist", tw, "twist along this cylinder index first");
  str->add_option("--n", n, "twist power");
  str->add_option("--box", box, "holonomy box of the cylinder listing");

  std::string power, range = "0..5";
  auto family_opts = [&](CLI::App* sub) {
    file_arg(sub);
    sub->add_option("--power", power, "powers a..b of the map");
    sub->add_option("--twist", tw, "twist along this cylinder index");
    sub->add_option("--n", range, "twist powers a..b");
    sub->add_option("--box", box, "holonomy box of the cylinder listing");
    sub->add_option("--iters", iters, "stretch iterations for non-affine members");
  };
  auto* fam = app.add_subcommand("family", "coarse table of a family (csv by default)");
  family_opts(fam);
  auto* tab = app.add_subcommand("table", "coarse table of a family (aligned text by default)");
  family_opts(tab);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return cmd_check(cfg);
    if (fix->parsed()) return cmd_fix_count(cfg);
    if (veer->parsed()) {
      if (vf.edges.empty() && !vf.section && !vf.flips && !vf.mapping_torus) vf.section = true;
      return cmd_veering(cfg, vf);
    }
    if (pock->parsed()) return cmd_pocket(cfg, box, pi, pj);
    if (ann->parsed()) {
      if (!list && cyl < 0) fail(ErrorKind::DegenerateInput, "annular needs --cyl or --list");
      return cmd_annular(cfg, box, cyl, list, kmax);
    }
    if (wit->parsed()) return cmd_witness(cfg, bound);
    if (str->parsed()) return cmd_stretch(cfg, iters, box, tw, n);
    if (fam->parsed() || tab->parsed()) {
      if (fam->parsed() && !app.get_option("--format")->count()) cfg.format = "csv";
      return cmd_family(cfg, power, range, tw, box, iters);
    }
  } catch (const CrossCheckFailure& e) {
    std::cerr << "cross-check failure: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.kind() == ErrorKind::Internal ? 3 : 2;
  }
  return 2;
}

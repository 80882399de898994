#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "veerfix/fixcount.hpp"
#include "veerfix/corpus.hpp"

using namespace veerfix;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int tetrahedra(const AffineAutomorphism& f) {
  Section T = f_section(f, complete_to_section(f.surface(), {}));
  Layering L = mapping_torus_layering(f, T);
  CHECK(L.closed());
  return static_cast<int>(L.tets.size());
}

}  // namespace

TEST_CASE("origami surfaces") {
  SurfacePtr one = origami_surface(one_square_pattern());
  CHECK(one->num_polygons() == 1);
  SurfacePtr l = origami_surface(l_shaped_pattern());
  CHECK(l->num_polygons() == 3);
  CHECK(kind_of([] { origami_surface({{0, 0}, {0, 1}}); }) == ErrorKind::DegenerateInput);
  CHECK(kind_of([] { origami_surface({{}, {}}); }) == ErrorKind::DegenerateInput);
  // two disjoint tori
  CHECK(kind_of([] { origami_surface({{0, 1}, {0, 1}}); }) == ErrorKind::NotFilling);
  // no affine map of the square torus with derivative 2 I
  const FieldPtr& k = one->field();
  Mat2 twice{k->from_rational(Rational(2)), k->zero(), k->zero(), k->from_rational(Rational(2))};
  CHECK(kind_of([&] { affine_with_derivative(one, twice); }) == ErrorKind::NotBijective);
}

TEST_CASE("the one-square construction is the cat map") {
  auto [s1, f1] = thurston_construction(one_square_pattern(), 1, 1);
  auto [s2, f2] = torus_from_matrix(2, 1, 1, 1);
  CHECK(f1.lambda().to_string() == f2.lambda().to_string());
  CHECK(s1->field()->minpoly().to_string() == s2->field()->minpoly().to_string());
  for (int n = 1; n <= 2; ++n) CHECK(count_fixed_points(f1.power(n)).total == count_fixed_points(f2.power(n)).total);
  CHECK(tetrahedra(f1) == tetrahedra(f2));
  CHECK(tetrahedra(f1) == 2);
}

TEST_CASE("the L-shaped construction") {
  auto [s, f] = thurston_construction(l_shaped_pattern(), 1, 1);
  // derivative [[5, 2], [2, 1]]: lambda = 3 + 2 sqrt 2
  CHECK(std::abs(f.lambda().to_double() - (3 + 2 * std::sqrt(2.0))) < 1e-12);
  FixReport r = count_fixed_points(f);
  CHECK(r.total == 3);
  CHECK(r.regular == 2);
  CHECK(r.lefschetz == lefschetz_number(f));
}

TEST_CASE("the nonoverlapped example") {
  NonoverlappedExample built = build_nonoverlapped_example();
  NonoverlappedExample shipped = nonoverlapped_example();
  CHECK(core_self_intersection(shipped.f, shipped.alpha) == 0);
  CHECK(shipped.alpha.hol == built.alpha.hol);
  FieldElement l1 = built.f.lambda(), l2 = shipped.f.lambda();
  CHECK(write_document(*shipped.surface, &shipped.f.map(), &l2) == write_document(*built.surface, &built.f.map(), &l1));
  // the map does not fix alpha's core curve
  Vec2 image = shipped.f.derivative() * shipped.alpha.hol;
  CHECK(!(image == shipped.alpha.hol));
  CHECK(!(image == -shipped.alpha.hol));

  namespace fs = std::filesystem;
  fs::path tmp = fs::temp_directory_path() / "veerfix_corrupt";
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  fs::copy_file(data_dir() + "/nonoverlapped/example.txt", tmp / "example.txt");
  // a curve meeting its image
  std::ofstream(tmp / "alpha.txt") << "hol_x = " << shipped.surface->field()->zero().to_string() << "\n";
  CHECK(kind_of([&] { nonoverlapped_example(tmp.string()); }) == ErrorKind::CorruptDataFile);
  std::ofstream(tmp / "alpha.txt") << "garbage\n";
  CHECK(kind_of([&] { nonoverlapped_example(tmp.string()); }) == ErrorKind::CorruptDataFile);
  CHECK(kind_of([&] { nonoverlapped_example((tmp / "missing").string()); }) == ErrorKind::CorruptDataFile);
  fs::remove_all(tmp);
}

TEST_CASE("shipped data matches the generator") {
  auto files = corpus_files();
  CHECK(files.size() == 5);
  auto again = corpus_files();
  CHECK(files == again);
  for (const auto& [rel, text] : files) {
    CAPTURE(rel);
    CHECK(slurp(data_dir() + "/" + rel) == text);
    if (rel.find("alpha") == std::string::npos) CHECK(parse_document(text).surface != nullptr);
  }
}

TEST_CASE("twisting along alpha") {
  NonoverlappedExample ex = nonoverlapped_example();
  CHECK(kind_of([&] {
          Cylinder bad = ex.alpha;
          bad.height = bad.height + bad.height;
          cylinder_twist(ex.surface, bad, 1);
        }) == ErrorKind::NotCylinder);
  Section T = complete_to_section(ex.surface, {});
  FixReport base = count_fixed_points(ex.f);
  CHECK(base.total == 2);
  for (int n = 0; n <= 10; ++n) {
    PiecewiseAffineMap h = twist_composite(ex.f, ex.alpha, n);
    CHECK(h.pieces().size() >= ex.f.map().pieces().size());
    if (n > 5) continue;
    FixReport r = oracle_count_fixed_points(h, T);
    CHECK(r.total == base.total);
    CHECK(r.regular == base.regular);
  }
}

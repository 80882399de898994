#pragma once

// Example generators: square-tiled surfaces with Thurston's multitwist
// construction, cylinder twists, and the shipped nonoverlapped example.

#include <string>
#include <vector>

#include "veerfix/saddle.hpp"

namespace veerfix {

/// Unit squares 0..n-1; h[i] is the right neighbor of square i and v[i]
/// the upper neighbor.
struct SquareTiledPattern {
  std::vector<int> h, v;
  int size() const { return static_cast<int>(h.size()); }
};

/// The square-tiled surface over Q. Every regular vertex class is marked.
/// Throws DegenerateInput for non-permutations and NotFilling if the
/// squares do not form a connected surface.
SurfacePtr origami_surface(const SquareTiledPattern& p);

/// Horizontal multitwist^a composed with vertical multitwist^b,
/// derivative [[1, a*mh], [0, 1]] * [[1, 0], [b*mv, 1]] where mh, mv are the
/// lcms of the cylinder circumferences, in eigen coordinates over Q(lambda).
std::pair<SurfacePtr, AffineAutomorphism> thurston_construction(const SquareTiledPattern& p, int a, int b);

/// The affine map with derivative D, searching all anchor corners; throws
/// NotBijective if no such map exists.
PiecewiseAffineMap affine_with_derivative(const SurfacePtr& s, const Mat2& D);

/// n-th power of the affine full twist supported on the cylinder (the
/// identity elsewhere). Throws NotCylinder unless c is a maximal cylinder of s.
PiecewiseAffineMap cylinder_twist(const SurfacePtr& s, const Cylinder& c, int n);
/// f composed after the n-th twist power, validated.
PiecewiseAffineMap twist_composite(const AffineAutomorphism& f, const Cylinder& c, int n);

/// i(core of c, f(core of c)) for a cylinder c.
int core_self_intersection(const AffineAutomorphism& f, const Cylinder& c);

struct NonoverlappedExample {
  SurfacePtr surface;
  AffineAutomorphism f;
  Cylinder alpha;  // f(alpha) is disjoint from alpha
};
/// Builds the example from scratch: the three-square L with the map of
/// derivative [[0, -1], [1, 4]] (quarter turn after the squared horizontal
/// multitwist) in eigen coordinates.
NonoverlappedExample build_nonoverlapped_example();
/// Loads and re-certifies the shipped copy; throws CorruptDataFile.
NonoverlappedExample nonoverlapped_example(const std::string& dir = "");

/// The cylinder with exactly this core holonomy; throws NotCylinder.
Cylinder cylinder_with_holonomy(const FlatSurface& s, const Vec2& hol);

/// The shipped data files as (path relative to the data tree, contents),
/// regenerated deterministically.
std::vector<std::pair<std::string, std::string>> corpus_files();

/// Location of the shipped data tree.
std::string data_dir();

/// Shipped patterns.
SquareTiledPattern l_shaped_pattern();  // three squares, genus 2
SquareTiledPattern one_square_pattern();

}  // namespace veerfix

#pragma once

// Exact fixed points of affine pseudo-Anosov maps: rectangle solves along
// section edges, a triangle-overlap oracle, indices, the Lefschetz number
// and a crossing-matrix upper bound.

#include <map>
#include <string>
#include <vector>

#include "veerfix/veering.hpp"

namespace veerfix {

enum class FixKind { Regular, Cone, Marked };
std::string to_string(FixKind k);

struct FixedPoint {
  int poly = -1;
  Vec2 p;
  FixKind kind = FixKind::Regular;
  int index = 0;
  PointKey key;  // canonical identity, used for deduplication
};

struct FixReport {
  int total = 0, regular = 0, singular = 0;
  std::vector<FixedPoint> points;  // sorted by key
  std::vector<std::pair<VEdge, std::vector<int>>> per_edge;  // indices into points
  int lefschetz = 0;  // sum of indices
  bool indices_known = true;  // false if some index could not be determined
  std::string method;
};

/// Regular fixed points in the immersed spanning rectangle of a veering
/// edge, one solve per crossing of sigma with f(sigma), deduplicated.
std::vector<FixedPoint> fixed_points_in_rectangle(const AffineAutomorphism& f, const VEdge& sigma);

/// Union over an annular-avoiding f-section plus fixed singular points.
FixReport count_fixed_points(const AffineAutomorphism& f);
FixReport count_fixed_points(const AffineAutomorphism& f, const Section& T);

/// Brute force over pairs of pieces of the faces of T and their images.
FixReport oracle_count_fixed_points(const AffineAutomorphism& f, const Section& T);
/// The same for a general piecewise-affine homeomorphism; singular points
/// are reported without an index.
FixReport oracle_count_fixed_points(const PiecewiseAffineMap& h, const Section& T);

/// Edge of T maximizing i(e, f(e)); ties go to the smallest edge.
VEdge max_edge(const Section& T, const AffineAutomorphism& f, int* value = nullptr);

/// -1 for regular points; at a fixed cone or marked point with p unstable
/// prongs, 1 - p if the prongs are fixed and +1 if they are rotated.
/// Throws NotFixed.
int fixed_point_index(const AffineAutomorphism& f, const SurfacePoint& p);

/// 2 - trace of f on H1(S; Q), from the action on the internal
/// triangulation's relative chain group.
int lefschetz_number(const AffineAutomorphism& f);

struct MarkovBound {
  long upper_bound = 0;  // >= #Fix(f)
  std::vector<std::vector<long>> matrix;  // entry (e, e') = i(e, f(e'))
  Rational perron_lo, perron_hi;  // Collatz-Wielandt bracket of the Perron root
};
MarkovBound markov_upper_bound(const AffineAutomorphism& f);
MarkovBound markov_upper_bound(const AffineAutomorphism& f, const Section& T);

}  // namespace veerfix

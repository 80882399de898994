#pragma once

// Annular projections to flat cylinders, stabilized projections of the
// invariant foliations, searches for curves disjoint from their images, and
// growth-rate estimates for piecewise-affine maps.

#include <optional>
#include <string>
#include <vector>

#include "veerfix/corpus.hpp"
#include "veerfix/fixcount.hpp"

namespace veerfix {

/// A straight arc crossing a cylinder, read in cylinder coordinates
/// X = O + a u + b w: it enters the bottom (b = 0) at a = entry and moves by
/// `slope` in a per unit of b.
struct AnnularArc {
  Vec2 hol;
  FieldElement slope;
  FieldElement entry;  // in [0, 1)
  long winding = 0;    // floor(entry + slope): exit point in the cover
};

/// Throws NoEssentialCrossing if c never runs across the cylinder.
AnnularArc annular_arc(const FlatSurface& s, const Cylinder& cyl, const SaddleConnection& c);
/// The arc after a map whose derivative on the cylinder is D and which
/// fixes its bottom boundary pointwise (a twist supported on it).
AnnularArc twisted_arc(const Cylinder& cyl, const AnnularArc& x, const Mat2& D);

/// 1 + the number of crossings of lifts to the annular cover, an endpoint
/// shared at the exit side counting as a crossing.
int annular_distance(const AnnularArc& x, const AnnularArc& y);
/// 0 for the same segment, otherwise as above.
int annular_distance(const FlatSurface& s, const Cylinder& cyl, const SaddleConnection& x, const SaddleConnection& y);

enum class EstimateStatus { Exact, Stabilized, BoundedBelow, BoundedAbove };
std::string to_string(EstimateStatus s);
struct ProjectionEstimate {
  int value = 0;
  EstimateStatus status = EstimateStatus::Exact;
};

struct LaminationProjection {
  AnnularArc arc;
  int start_corner = -1;  // the iterate f^{-+k}(sigma) realizing it
  Vec2 hol;
  int iterations = 0;
  std::vector<AnnularArc> window;  // the stabilized iterates, arc last
};
/// Projection of the vertical (sign > 0) or horizontal (sign < 0) foliation,
/// by iterating a section edge until four consecutive projections have
/// lifts with pairwise disjoint interiors. Throws NonStabilizing after k_max
/// iterations.
LaminationProjection lamination_projection(const AffineAutomorphism& f, const Cylinder& cyl, int sign, int k_max = 64);
/// d(pi(lambda+), pi(lambda-)): the largest distance between arcs of the
/// two stabilized windows.
ProjectionEstimate lamination_distance(const AffineAutomorphism& f, const Cylinder& cyl, int k_max = 64);

/// Cylinders whose core holonomy lies in the box [-L, L]^2, shortest first.
std::vector<Cylinder> cylinders_up_to(const FlatSurface& s, const FieldElement& L);
/// A cylinder core alpha with i(alpha, f(alpha)) = 0, if one exists with
/// holonomy in [-L, L]^2.
std::optional<Cylinder> irreducibility_witness_search(const AffineAutomorphism& f, const FieldElement& L);

struct StretchEstimate {
  double value = 0, error = 0;
  int iterations = 0;
};
/// Growth rate of the total length of the images of the internal
/// triangulation's edges, in floating point. Throws DegenerateCurve if the
/// lengths collapse.
StretchEstimate stretch_estimate(const PiecewiseAffineMap& h, int iters);

struct FamilyMember {
  std::string id;
  PiecewiseAffineMap map;
  std::optional<AffineAutomorphism> affine;  // set when the map is affine
  std::optional<Cylinder> annulus;           // the annulus whose term is tabulated
  int twist = 0;                             // twist power applied along the annulus
  std::optional<AffineAutomorphism> base;    // untwisted map for twist members
};
struct TableRow {
  std::string id;
  bool failed = false;
  std::string error;
  int total = 0, regular = 0;
  double log_stretch = 0;
  bool stretch_exact = false;
  int annular_term = -1;  // -1: none computed
  std::string annular_status;
  std::string witness;  // "found", "none_found(L)" or "skipped"
};
std::vector<TableRow> coarse_table(const std::vector<FamilyMember>& family, int stretch_iters = 10);
std::string table_text(const std::vector<TableRow>& rows);
std::string table_csv(const std::vector<TableRow>& rows);

}  // namespace veerfix

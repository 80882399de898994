#pragma once

// Saddle connections, spanning rectangles, cylinders and intersection
// numbers.

#include <optional>
#include <vector>

#include "veerfix/flatsurf.hpp"

namespace veerfix {

/// An oriented straight segment between cone points. `hol` is read in the
/// chart of the start corner, whose half-open wedge contains it; the pair
/// (start_corner, hol) identifies the connection.
struct SaddleConnection {
  int start_corner = -1;
  int end_corner = -1;  // corner of arrival (its closed wedge contains -hol)
  int start = -1, end = -1;  // vertex classes
  Vec2 hol;
  std::vector<std::pair<int, int>> chain;  // (triangle, edge) crossings in order

  std::string to_string() const;
};

/// Orientation-sensitive identity.
bool same_oriented(const SaddleConnection& a, const SaddleConnection& b);
/// Equal as unoriented segments.
bool same_segment(const FlatSurface& s, const SaddleConnection& a, const SaddleConnection& b);
bool key_less(const SaddleConnection& a, const SaddleConnection& b);

/// The connection leaving `corner` (any corner at the start vertex; the
/// wedge is normalized) with holonomy `hol`. Throws PassesThroughSingularity
/// or DegenerateInput if the segment is not a saddle connection.
SaddleConnection saddle_from(const FlatSurface& s, int corner, const Vec2& hol);
SaddleConnection reversed(const FlatSurface& s, const SaddleConnection& c);
/// The connection along triangle edge e of triangle t, oriented v[e] -> v[e+1].
SaddleConnection edge_saddle(const FlatSurface& s, int t, int e);
/// The trace of a connection; the trace chart is the start corner's chart.
Trace trace_of(const FlatSurface& s, const SaddleConnection& c);

/// Every oriented connection with |hol_x| <= bx and |hol_y| <= by, sorted
/// by start vertex, then holonomy.
std::vector<SaddleConnection> enumerate_saddles(const FlatSurface& s, const FieldElement& bx, const FieldElement& by);

struct Cylinder {
  Vec2 hol;             // holonomy of the core curve (positive multiple of the direction)
  FieldElement height;  // in units of |hol|: the cylinder is base + a*hol + b*rot90(hol), 0 <= a, b < 1, height
  FieldElement area;    // |hol|^2 * height
  std::vector<SaddleConnection> bottom;  // boundary on the right, oriented along hol
  int base_corner = -1;                  // start corner of bottom[0]

  /// Transversal from bottom to top: height * rot90(hol).
  Vec2 transversal() const { return height * Vec2{-hol.y, hol.x}; }
};

/// All maximal cylinders whose core holonomy is c * dir with 0 < c <= bound.
std::vector<Cylinder> cylinders_in_direction(const FlatSurface& s, const Vec2& dir, const FieldElement& bound);

struct SpanningRectangle {
  SaddleConnection edge;
  Polygon rect;  // in the start corner's chart; edge runs from rect corner to opposite corner
  std::vector<DevPiece> pieces;
  int degree = 1;
  std::optional<Cylinder> witness;  // present when degree >= 2
  bool ambiguous_witness = false;   // non-parallel self-overlaps were found
};

/// Spanning rectangle of a veering edge, nullopt if the open rectangle
/// contains a cone point. Throws HorizontalOrVertical.
std::optional<SpanningRectangle> is_veering_edge(const FlatSurface& s, const SaddleConnection& c);

/// Transverse interior intersections; throws OverlappingSegments for
/// collinear overlap.
int intersection_number(const FlatSurface& s, const SaddleConnection& a, const SaddleConnection& b);

/// Points of a trace in triangle charts, one segment per step.
struct ChartSegment {
  int tri;
  Vec2 p0, p1;
  FieldElement t0, t1;  // global parameters of the endpoints
};
std::vector<ChartSegment> chart_segments(const Trace& tr);
/// Transverse interior crossings of two connections given by their chart
/// segments (parameters in [0, 1]); throws OverlappingSegments.
int crossing_count(const std::vector<ChartSegment>& a, const std::vector<ChartSegment>& b);

struct Crossing {
  FieldElement ta, tb;  // parameters along a and b
  int tri;
  Vec2 p;  // in the triangle chart
};
/// The crossings themselves, sorted along a.
std::vector<Crossing> crossings(const std::vector<ChartSegment>& a, const std::vector<ChartSegment>& b);

/// Closed straight curve through the regular point p with holonomy hol;
/// throws DegenerateInput unless the trajectory closes up at p.
std::vector<ChartSegment> closed_geodesic(const FlatSurface& s, const SurfacePoint& p, const Vec2& hol);
/// Interior point of a cylinder on its core curve (mid height).
SurfacePoint core_point(const FlatSurface& s, const Cylinder& c);
/// Transverse crossings of two closed curves, parameters taken mod 1.
/// Throws OverlappingSegments if they share a segment.
int closed_crossing_count(const std::vector<ChartSegment>& a, const std::vector<ChartSegment>& b);

}  // namespace veerfix

#pragma once

// Half-translation surfaces given by convex polygons with edge gluings, and
// piecewise-affine self-maps of them.
//
// Internally every polygon is fan-triangulated from its vertex 0. Triangles
// use the coordinates of their polygon, so the transition between two
// triangles of one polygon is the identity. A corner is encoded as
// 3 * triangle + local vertex index.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "veerfix/geometry.hpp"

namespace veerfix {

struct PolygonSpec {
  std::string name;
  Polygon vertices;
};

struct GlueSpec {
  int poly_a, edge_a;
  int poly_b, edge_b;
  bool halfturn = false;
};

struct SurfaceSpec {
  FieldPtr field;
  std::vector<PolygonSpec> polygons;
  std::vector<GlueSpec> gluings;
  std::vector<std::pair<int, int>> marks;  // (polygon, vertex)
};

struct ConePoint {
  int id;
  int angle_pi;  // total angle divided by pi
  bool marked;
};

/// A point in the coordinates of a named polygon (closed polygon).
struct SurfacePoint {
  int poly;
  Vec2 p;
};

/// Canonical identity of a surface point: vertices by their class, edge
/// points by the smaller of their two representatives.
struct PointKey {
  int vertex = -1;  // vertex class, or -1
  int poly = -1;
  Vec2 p;

  friend bool operator<(const PointKey& a, const PointKey& b) {
    if (a.vertex != b.vertex) return a.vertex < b.vertex;
    if (a.poly != b.poly) return a.poly < b.poly;
    if (a.vertex >= 0) return false;
    return key_less(a.p, b.p);
  }
  friend bool operator==(const PointKey& a, const PointKey& b) { return !(a < b) && !(b < a); }
};

/// A representative of a surface point in a triangle chart; X maps the
/// chart of the point's polygon to the triangle's chart.
struct ChartRep {
  int tri;
  Vec2 q;
  Xform X;
};

struct Triangle {
  int poly;
  std::array<int, 3> pv;    // polygon vertex indices
  std::array<Vec2, 3> v;    // coordinates in the polygon chart
  std::array<int, 3> nbr;   // triangle across edge i (edge i runs v[i] -> v[i+1])
  std::array<int, 3> nbr_edge;
  std::array<Xform, 3> to_nbr;  // this chart -> neighbor chart
  std::array<bool, 3> on_boundary;  // edge i lies on the polygon boundary
};

/// A piece of a developed region: the part of the region covered by
/// triangle `tri` placed by `T` (triangle chart -> developing plane).
struct DevPiece {
  int tri;
  Xform T;
  Polygon region;  // developing-plane coordinates
};

struct DevelopResult {
  std::vector<DevPiece> pieces;
  bool hit_vertex = false;  // a cone point lies in the open region
};

struct TraceStep {
  int tri;
  Xform T;           // chart -> developing plane
  FieldElement t0, t1;
  int entry_edge;    // -1 at the start
  int exit_edge;     // -1 when the segment ends in this triangle
};

struct Trace {
  Vec2 origin;  // start point in the developing plane (= start chart)
  Vec2 dir;
  std::vector<TraceStep> steps;
  FieldElement t_end;
  int end_corner = -1;  // corner reached when the trace stops at a vertex

  Vec2 point_at(const FieldElement& t) const { return origin + t * dir; }
};

class FlatSurface {
 public:
  /// Verifies all invariants; throws UnmatchedEdge, LengthMismatch,
  /// NonConvexPolygon, GaussBonnetViolation or DegenerateInput.
  static std::shared_ptr<const FlatSurface> validate(const SurfaceSpec& spec);

  const FieldPtr& field() const { return spec_.field; }
  const SurfaceSpec& spec() const { return spec_; }
  int num_polygons() const { return static_cast<int>(spec_.polygons.size()); }
  const Polygon& polygon(int i) const { return spec_.polygons[i].vertices; }
  const std::string& polygon_name(int i) const { return spec_.polygons[i].name; }
  int polygon_index(const std::string& name) const;

  /// Partner of polygon edge (p, e) and the chart map p -> partner.
  struct EdgeGlue {
    int poly, edge;
    Xform to;
  };
  const EdgeGlue& glue(int p, int e) const { return glue_[p][e]; }
  bool has_halfturns() const { return has_halfturns_; }

  int vertex_class(int poly, int v) const { return vclass_[poly][v]; }
  const std::vector<ConePoint>& cone_points() const { return cones_; }
  int num_vertices() const { return static_cast<int>(cones_.size()); }
  int num_edges() const { return num_edges_; }
  /// Euler characteristic of the closed surface S.
  int euler_characteristic() const { return num_vertices() - num_edges_ + num_polygons(); }
  int genus() const { return (2 - euler_characteristic()) / 2; }
  /// Number of edges in an ideal triangulation of the punctured surface.
  // of the surface punctured at every cone point and marked point
  int punctured_euler_characteristic() const { return euler_characteristic() - num_vertices(); }
  int section_size() const { return -3 * punctured_euler_characteristic(); }
  FieldElement area() const;

  // internal triangulation
  const std::vector<Triangle>& triangles() const { return tris_; }
  const Triangle& tri(int t) const { return tris_[t]; }
  const std::vector<int>& poly_triangles(int p) const { return poly_tris_[p]; }
  int corner_vertex(int c) const { return vclass_[tris_[c / 3].poly][tris_[c / 3].pv[c % 3]]; }
  const std::vector<int>& vertex_corners(int v) const { return vcorners_[v]; }
  /// Corner position and edge directions in the triangle chart.
  const Vec2& corner_pos(int c) const { return tris_[c / 3].v[c % 3]; }
  Vec2 corner_out(int c) const;  // toward the next vertex of the triangle
  Vec2 corner_in(int c) const;   // toward the previous vertex
  /// Next corner counterclockwise around the same vertex, with the chart
  /// map from this corner's chart to the next one's.
  std::pair<int, Xform> next_ccw(int c) const;
  bool wedge_contains(int c, const Vec2& dir) const;  // half-open [out, in)
  /// First corner counterclockwise from c (inclusive) whose wedge contains
  /// dir, with the chart map from c's chart to the returned corner's chart.
  std::pair<int, Xform> corner_containing(int c, const Vec2& dir) const;
  /// Like corner_containing, but starting from reference direction `ref`
  /// inside c's wedge: finds the corner hit by rotating ccw from ref to dir.
  std::pair<int, Xform> corner_after(int c, const Vec2& ref, const Vec2& dir) const;

  // points
  Where locate_in_polygon(int poly, const Vec2& p, int* index = nullptr) const;
  PointKey canonical(const SurfacePoint& pt) const;
  /// Triangle and chart position from which `dir` leaves (or runs along the
  /// left side of the boundary of) the triangle; pt must be a regular point.
  ChartRep start_for(const SurfacePoint& pt, const Vec2& dir) const;
  /// All representatives of a point in closed triangles.
  std::vector<ChartRep> representatives(const SurfacePoint& pt) const;
  SurfacePoint to_surface(int tri, const Vec2& chart) const { return {tris_[tri].poly, chart}; }

  /// Breadth-first development of a convex region starting with triangle
  /// `tri` placed by T0. The region must overlap T0(tri) in positive area.
  DevelopResult develop_region(const Polygon& region, int tri, const Xform& T0, bool stop_on_vertex = false) const;

  /// Straight segment p + t * dir for t in [0, tmax].
  Trace trace_from_point(const SurfacePoint& p, const Vec2& dir, const FieldElement& tmax, bool stop_at_vertex = false) const;
  Trace trace_from_corner(int corner, const Vec2& dir, const FieldElement& tmax, bool stop_at_vertex = false) const;
  Trace trace_from(int tri, const Vec2& chart, const Vec2& dir, const FieldElement& tmax, bool stop_at_vertex) const;

 private:
  SurfaceSpec spec_;
  std::vector<std::vector<EdgeGlue>> glue_;
  std::vector<std::vector<int>> vclass_;
  std::vector<ConePoint> cones_;
  std::vector<std::vector<int>> vcorners_;
  std::vector<Triangle> tris_;
  std::vector<std::vector<int>> poly_tris_;
  int num_edges_ = 0;
  bool has_halfturns_ = false;
};

using SurfacePtr = std::shared_ptr<const FlatSurface>;

// ---------------------------------------------------------------------------
// maps

struct MapPiece {
  int src;
  Polygon region;  // in the chart of polygon src
  Mat2 D;
  Vec2 t;          // x -> D x + t, in the chart of polygon dst
  int dst;
};

class PiecewiseAffineMap {
 public:
  PiecewiseAffineMap() = default;
  PiecewiseAffineMap(SurfacePtr s, std::vector<MapPiece> pieces);

  const SurfacePtr& surface() const { return surface_; }
  const std::vector<MapPiece>& pieces() const { return pieces_; }

  /// Any piece containing the point (closed); nullopt if none.
  std::optional<int> piece_at(const SurfacePoint& p) const;
  SurfacePoint apply(const SurfacePoint& p) const;
  PointKey apply_key(const SurfacePoint& p) const { return surface_->canonical(apply(p)); }

  /// Verifies tiling, continuity and bijectivity; throws NotBijective or
  /// Discontinuous.
  void validate() const;
  /// Permutation of vertex classes; throws Discontinuous if a vertex maps
  /// to a regular point.
  std::vector<int> vertex_permutation() const;
  bool is_identity() const;
  bool has_constant_derivative() const;

  PiecewiseAffineMap inverse() const;
  /// Pieces of the map restricted to source polygon p.
  const std::vector<int>& pieces_of(int p) const { return by_src_[p]; }

 private:
  SurfacePtr surface_;
  std::vector<MapPiece> pieces_;
  std::vector<std::vector<int>> by_src_;
  std::vector<BBox> boxes_;
};

/// (f ∘ g)(x) = f(g(x)), pieces refined by exact polygon intersection.
PiecewiseAffineMap compose(const PiecewiseAffineMap& f, const PiecewiseAffineMap& g);

class AffineAutomorphism {
 public:
  /// Verifies derivative diag(λ, 1/λ) with λ > 1 on every piece, then
  /// continuity and bijectivity.
  static AffineAutomorphism validate(const PiecewiseAffineMap& m);

  const PiecewiseAffineMap& map() const { return map_; }
  const SurfacePtr& surface() const { return map_.surface(); }
  const FieldElement& lambda() const { return lambda_; }
  Mat2 derivative() const { return Mat2::diag(lambda_, lambda_.inverse()); }
  const std::vector<int>& vertex_permutation() const { return perm_; }

  SurfacePoint apply(const SurfacePoint& p) const { return map_.apply(p); }
  AffineAutomorphism inverse() const;
  AffineAutomorphism power(int n) const;

 private:
  PiecewiseAffineMap map_;
  FieldElement lambda_;
  std::vector<int> perm_;
};

/// Affine map with derivative D sending the vertex of `src_corner` to the
/// vertex of `dst_corner`, with D mapping directions of the source wedge near
/// the vertex into the target wedge. Built by developing the image of every
/// triangle; the result is not validated.
PiecewiseAffineMap affine_map_from_anchor(const SurfacePtr& s, const Mat2& D, int src_corner, int dst_corner);

/// Applies the linear change of coordinates x -> A x to a surface and
/// conjugates a map accordingly (the new map is A f A^-1). A must have
/// positive determinant. Elements are coerced into A's field.
SurfacePtr change_coordinates(const FlatSurface& s, const Mat2& A);
PiecewiseAffineMap change_coordinates(const PiecewiseAffineMap& f, const SurfacePtr& target, const Mat2& A);

/// Q(lambda) for the larger eigenvalue of an integer matrix of determinant
/// 1 and trace > 2, and the change of basis taking the expanding and
/// contracting eigenvectors to the coordinate axes (positive determinant).
struct EigenFrame {
  FieldPtr field;
  FieldElement lambda;
  Mat2 to_eigen;
};
EigenFrame eigen_frame(long a, long b, long c, long d);

/// Torus R^2 / Z^2 with one marked point in the eigenbasis of M, and the map
/// induced by M. Throws NotHyperbolic unless det M = 1 and |tr M| > 2.
std::pair<SurfacePtr, AffineAutomorphism> torus_from_matrix(long a, long b, long c, long d);

// ---------------------------------------------------------------------------
// file format

struct Document {
  SurfacePtr surface;
  std::optional<PiecewiseAffineMap> map;
  std::optional<FieldElement> lambda;
};

Document parse_document(const std::string& text);
Document read_document(const std::string& path);
std::string write_document(const FlatSurface& s, const PiecewiseAffineMap* m, const FieldElement* lambda);

}  // namespace veerfix

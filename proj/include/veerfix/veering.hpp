#pragma once

// Sections of the veering triangulation: triangulations of the punctured
// surface by singularity-free saddle connections, flips between them, the
// above/below order, pockets and f-sections.

#include <optional>
#include <string>
#include <vector>

#include "veerfix/saddle.hpp"

namespace veerfix {

/// A veering edge in its canonical orientation (hol_x > 0), with its
/// reverse and its trace cached.
struct VEdge {
  SaddleConnection fwd, rev;
  std::vector<ChartSegment> segs;

  const Vec2& hol() const { return fwd.hol; }
};

/// Builds the cached form; throws HorizontalOrVertical for axis-parallel
/// connections. Veering-ness is not checked here.
VEdge make_vedge(const FlatSurface& s, const SaddleConnection& c);
bool key_less(const VEdge& a, const VEdge& b);
bool same_edge(const VEdge& a, const VEdge& b);

bool edges_cross(const VEdge& a, const VEdge& b);
int intersection_number(const VEdge& a, const VEdge& b);

enum class Order { Below, Above, Disjoint, Equal };
std::string to_string(Order o);
/// Below iff a crosses the spanning rectangle of b from left to right.
Order edge_order(const VEdge& a, const VEdge& b);

/// Dart 2*i is edge i forward, 2*i+1 backward.
struct Face {
  std::array<int, 3> darts;
};

class Section {
 public:
  Section() = default;
  /// Validates: pairwise noncrossing (NotNoncrossing), correct size, and
  /// triangular faces. With check_veering every edge is tested for an
  /// empty spanning rectangle.
  static Section from_edges(SurfacePtr s, std::vector<VEdge> edges, bool check_veering = true);

  const SurfacePtr& surface() const { return s_; }
  const std::vector<VEdge>& edges() const { return edges_; }
  const std::vector<Face>& faces() const { return faces_; }
  int size() const { return static_cast<int>(edges_.size()); }
  std::optional<int> find(const VEdge& e) const;
  bool contains(const VEdge& e) const { return find(e).has_value(); }

  /// The two faces adjacent to edge i: (left of fwd, left of rev).
  std::pair<int, int> adjacent_faces(int i) const { return {face_of_dart_[2 * i], face_of_dart_[2 * i + 1]}; }
  int next_dart(int d) const { return next_[d]; }
  const SaddleConnection& dart(int d) const { return d % 2 == 0 ? edges_[d / 2].fwd : edges_[d / 2].rev; }

  bool upward_flippable(int i) const;
  bool downward_flippable(int i) const;
  /// Replace edge i by the other diagonal of its quadrilateral; throws
  /// NotFlippable unless the flip goes in the stated direction.
  Section flip_up(int i) const;
  Section flip_down(int i) const;
  /// The new edge created by flipping edge i (without checks).
  VEdge flipped_edge(int i) const;

  friend bool operator==(const Section& a, const Section& b);
  std::string to_string() const;

 private:
  void build_faces();
  SurfacePtr s_;
  std::vector<VEdge> edges_;  // sorted by key_less
  std::vector<int> next_;
  std::vector<int> face_of_dart_;
  std::vector<Face> faces_;
};

/// Candidate veering edges with |hol| inside the box, sorted by rectangle
/// area then key.
std::vector<VEdge> veering_edges_in_box(const FlatSurface& s, const FieldElement& bx, const FieldElement& by);

/// Greedy completion of a noncrossing set of veering edges.
Section complete_to_section(const SurfacePtr& s, const std::vector<VEdge>& K);

/// Highest / lowest section containing e: the only upward (resp. downward)
/// flippable edge is e.
Section t_plus(const SurfacePtr& s, const VEdge& e);
Section t_minus(const SurfacePtr& s, const VEdge& e);

/// Pointwise maximum / minimum in the above/below order.
Section section_max(const Section& a, const Section& b, int* flips = nullptr);
Section section_min(const Section& a, const Section& b, int* flips = nullptr);
/// True iff no edge of a lies above an edge of b.
bool section_leq(const Section& a, const Section& b);

/// Image of a veering edge / section under a translation-surface map.
VEdge image_edge(const PiecewiseAffineMap& f, const VEdge& e);
Section image_section(const PiecewiseAffineMap& f, const Section& T);

/// Maximum of the family f^i(T0): the result T satisfies f(T) <= T.
Section f_section(const AffineAutomorphism& f, const Section& T0);
/// f-section whose edges all have spanning-rectangle degree <= max_degree.
Section annular_avoiding_f_section(const AffineAutomorphism& f, const Section& T0, int max_degree = 15);

struct Pocket {
  std::vector<VEdge> top, bottom;  // P+ and P-
  int flips = 0;                   // tetrahedra between them
  int intersection = 0;            // i(P+, P-)
};
/// The pocket with sigma1 on top and sigma2 on the bottom. Throws
/// NotCrossing, or WrongOrder unless sigma1 is above sigma2.
Pocket pocket(const SurfacePtr& s, const VEdge& sigma1, const VEdge& sigma2);

struct Tetrahedron {
  VEdge bottom, top;
  // face k is opposite vertex k; partner (tet, face) and the vertex map
  std::array<int, 4> partner_tet{}, partner_face{};
  std::array<std::array<int, 4>, 4> perm{};
};
struct Layering {
  std::vector<Tetrahedron> tets;
  std::string gluing_table() const;
  bool closed() const;
};
/// Upward flip sequence from f(T) to T, one tetrahedron per flip, faces of
/// T glued to their images in f(T).
Layering mapping_torus_layering(const AffineAutomorphism& f, const Section& T);

}  // namespace veerfix

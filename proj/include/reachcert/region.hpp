#ifndef REACHCERT_REGION_HPP
#define REACHCERT_REGION_HPP

#include <span>
#include <vector>

#include "reachcert/box.hpp"

namespace reachcert {

// Finite union of axis-aligned boxes in state space. Pieces may overlap;
// membership is union semantics.
class RegionSpec {
 public:
  RegionSpec() = default;
  explicit RegionSpec(std::vector<Box> pieces);

  static RegionSpec empty() { return RegionSpec(); }
  static RegionSpec single(Box b) { return RegionSpec({std::move(b)}); }

  bool is_empty() const { return pieces_.empty(); }
  int arity() const { return pieces_.empty() ? -1 : pieces_[0].arity(); }
  const std::vector<Box>& pieces() const { return pieces_; }

  bool contains_point(std::span<const double> x) const;
  // Conservative cover containment: true iff box \ region is empty.
  bool covers_box(const Box& b) const;
  bool disjoint_box(const Box& b) const;  // closed-box disjointness

  Box bounding_box() const;  // errors on empty

 private:
  std::vector<Box> pieces_;
};

// Exact box cover of closure(a \ b): splits each a-piece along b-piece
// bounds; result pieces have disjoint interiors per input piece.
RegionSpec region_difference(const RegionSpec& a, const RegionSpec& b);

// True iff a is covered by b (a \ b is empty).
bool region_subset(const RegionSpec& a, const RegionSpec& b);

// The 2n facet boxes of the single-box region `outer`, minus facets fully
// shared with facets of `inner` pieces. A sound superset of the boundary
// difference.
RegionSpec boundary_faces(const RegionSpec& outer, const RegionSpec& inner);

}  // namespace reachcert

#endif

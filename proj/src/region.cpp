#include "reachcert/region.hpp"

#include <algorithm>
#include <limits>

namespace reachcert {

RegionSpec::RegionSpec(std::vector<Box> pieces) : pieces_(std::move(pieces)) {
  for (const auto& p : pieces_)
    if (p.arity() != pieces_[0].arity())
      throw PolyError("region pieces disagree on arity");
}

bool RegionSpec::contains_point(std::span<const double> x) const {
  for (const auto& p : pieces_)
    if (p.contains_point(x)) return true;
  return false;
}

bool RegionSpec::covers_box(const Box& b) const {
  return region_subset(RegionSpec::single(b), *this);
}

bool RegionSpec::disjoint_box(const Box& b) const {
  for (const auto& p : pieces_)
    if (!p.disjoint(b)) return false;
  return true;
}

Box RegionSpec::bounding_box() const {
  if (pieces_.empty()) throw PolyError("bounding box of empty region");
  std::vector<Interval> dims = pieces_[0].dims();
  for (const auto& p : pieces_) {
    for (int i = 0; i < p.arity(); ++i) {
      dims[i].lo = std::min(dims[i].lo, p.dim(i).lo);
      dims[i].hi = std::max(dims[i].hi, p.dim(i).hi);
    }
  }
  return Box(std::move(dims));
}

namespace {

// Splits `a` along the bounds of `cut` and returns the cells that are not
// contained in `cut`. Cells are closed, so the result is the closure of
// a \ cut restricted to a.
std::vector<Box> subtract_box(const Box& a, const Box& cut) {
  if (a.disjoint(cut)) return {a};
  if (cut.contains_box(a)) return {};
  std::vector<Box> out;
  Box rest = a;
  for (int d = 0; d < a.arity(); ++d) {
    double clo = cut.dim(d).lo, chi = cut.dim(d).hi;
    if (rest.dim(d).lo < clo) {
      Box below = rest;
      below.dim(d).hi = clo;
      out.push_back(below);
      rest.dim(d).lo = clo;
    }
    if (rest.dim(d).hi > chi) {
      Box above = rest;
      above.dim(d).lo = chi;
      out.push_back(above);
      rest.dim(d).hi = chi;
    }
  }
  // `rest` is now contained in cut and is dropped
  return out;
}

bool is_degenerate(const Box& b) {
  for (const auto& iv : b.dims())
    if (iv.lo == iv.hi) return true;
  return false;
}

}  // namespace

RegionSpec region_difference(const RegionSpec& a, const RegionSpec& b) {
  if (a.is_empty()) return RegionSpec::empty();
  if (!b.is_empty() && a.arity() != b.arity())
    throw PolyError("arity mismatch in region_difference");
  std::vector<Box> work(a.pieces());
  for (const auto& cut : b.pieces()) {
    std::vector<Box> next;
    for (const auto& w : work) {
      auto cells = subtract_box(w, cut);
      next.insert(next.end(), cells.begin(), cells.end());
    }
    work = std::move(next);
  }
  std::sort(work.begin(), work.end());
  work.erase(std::unique(work.begin(), work.end()), work.end());
  return RegionSpec(std::move(work));
}

bool region_subset(const RegionSpec& a, const RegionSpec& b) {
  if (a.is_empty()) return true;
  if (b.is_empty()) return false;
  std::vector<Box> work(a.pieces());
  for (const auto& cut : b.pieces()) {
    std::vector<Box> next;
    for (const auto& w : work) {
      auto cells = subtract_box(w, cut);
      next.insert(next.end(), cells.begin(), cells.end());
    }
    work = std::move(next);
    if (work.empty()) return true;
  }
  // leftover zero-volume shavings along shared faces do not witness
  // non-containment of the underlying point sets
  for (const auto& w : work) {
    if (!is_degenerate(w)) return false;
    // a degenerate leftover must still lie inside b to count as covered
    if (!b.contains_point(w.center())) return false;
  }
  return true;
}

RegionSpec boundary_faces(const RegionSpec& outer, const RegionSpec& inner) {
  if (outer.pieces().size() != 1)
    throw PolyError("boundary_faces requires a single outer box");
  const Box& X = outer.pieces()[0];
  int n = X.arity();

  auto facets_of = [](const Box& b) {
    std::vector<Box> fs;
    for (int d = 0; d < b.arity(); ++d) {
      Box lo = b, hi = b;
      lo.dim(d).hi = b.dim(d).lo;
      hi.dim(d).lo = b.dim(d).hi;
      fs.push_back(lo);
      fs.push_back(hi);
    }
    return fs;
  };

  std::vector<Box> inner_facets;
  for (const auto& p : inner.pieces()) {
    auto fs = facets_of(p);
    inner_facets.insert(inner_facets.end(), fs.begin(), fs.end());
  }

  std::vector<Box> kept;
  for (int d = 0; d < n; ++d) {
    for (int side = 0; side < 2; ++side) {
      Box f = X;
      if (side == 0)
        f.dim(d).hi = X.dim(d).lo;
      else
        f.dim(d).lo = X.dim(d).hi;
      bool shared = false;
      for (const auto& g : inner_facets) {
        if (g.contains_box(f)) {
          shared = true;
          break;
        }
      }
      if (!shared) kept.push_back(f);
    }
  }
  return RegionSpec(std::move(kept));
}

}  // namespace reachcert

#ifndef REACHCERT_BOX_HPP
#define REACHCERT_BOX_HPP

#include <span>
#include <vector>

#include "reachcert/poly.hpp"

namespace reachcert {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
};

// Axis-aligned closed box. Degenerate dimensions (lo == hi) are allowed
// and are used to represent faces.
class Box {
 public:
  Box() = default;
  explicit Box(std::vector<Interval> dims);
  static Box from_pairs(const std::vector<std::pair<double, double>>& p);

  int arity() const { return static_cast<int>(dims_.size()); }
  const std::vector<Interval>& dims() const { return dims_; }
  Interval& dim(int i) { return dims_[i]; }
  const Interval& dim(int i) const { return dims_[i]; }

  bool contains_point(std::span<const double> x) const;
  bool contains_box(const Box& o) const;
  bool disjoint(const Box& o) const;  // closed boxes: shared faces intersect

  std::vector<double> center() const;
  std::vector<std::vector<double>> corners() const;  // 2^n points
  double max_width() const;
  int widest_dim() const;  // ties broken by lowest index

  // Splits at the midpoint of the widest dimension; lower half first.
  std::pair<Box, Box> split() const;

  // Lexicographic on (lo, hi) sequences; used for deterministic ordering.
  bool operator<(const Box& o) const;
  bool operator==(const Box& o) const { return dims_ == o.dims_; }

 private:
  std::vector<Interval> dims_;
};

struct RangeEnclosure {
  double lo = 0.0;
  double hi = 0.0;
};

// Rigorous range enclosure of p over box: Bernstein coefficient bounds
// after an affine transform to the unit box, with outward rounding via a
// running magnitude shadow; falls back to interval arithmetic above the
// degree cap. Degenerate dimensions are substituted away first.
RangeEnclosure enclose_range(const Polynomial& p, const Box& box);

// Plain interval-arithmetic enclosure (the fallback path, exposed for
// tests).
RangeEnclosure enclose_range_interval(const Polynomial& p, const Box& box);

// Total degree above which Bernstein conversion is abandoned.
inline constexpr int kBernsteinDegreeCap = 40;

}  // namespace reachcert

#endif

#include "reachcert/box.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace reachcert {

Box::Box(std::vector<Interval> dims) : dims_(std::move(dims)) {
  for (const auto& iv : dims_) {
    if (!(iv.lo <= iv.hi)) throw PolyError("box interval with lo > hi");
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
      throw PolyError("box interval must be finite");
  }
}

Box Box::from_pairs(const std::vector<std::pair<double, double>>& p) {
  std::vector<Interval> d;
  d.reserve(p.size());
  for (auto [lo, hi] : p) d.push_back({lo, hi});
  return Box(std::move(d));
}

bool Box::contains_point(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != arity()) return false;
  for (int i = 0; i < arity(); ++i)
    if (x[i] < dims_[i].lo || x[i] > dims_[i].hi) return false;
  return true;
}

bool Box::contains_box(const Box& o) const {
  if (o.arity() != arity()) return false;
  for (int i = 0; i < arity(); ++i)
    if (o.dims_[i].lo < dims_[i].lo || o.dims_[i].hi > dims_[i].hi) return false;
  return true;
}

bool Box::disjoint(const Box& o) const {
  for (int i = 0; i < arity(); ++i)
    if (o.dims_[i].hi < dims_[i].lo || o.dims_[i].lo > dims_[i].hi) return true;
  return false;
}

std::vector<double> Box::center() const {
  std::vector<double> c(arity());
  for (int i = 0; i < arity(); ++i) c[i] = dims_[i].mid();
  return c;
}

std::vector<std::vector<double>> Box::corners() const {
  int n = arity();
  std::vector<std::vector<double>> out;
  out.reserve(size_t{1} << n);
  for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i)
      p[i] = (mask >> i) & 1 ? dims_[i].hi : dims_[i].lo;
    out.push_back(std::move(p));
  }
  return out;
}

double Box::max_width() const {
  double w = 0.0;
  for (const auto& iv : dims_) w = std::max(w, iv.width());
  return w;
}

int Box::widest_dim() const {
  int best = 0;
  double w = -1.0;
  for (int i = 0; i < arity(); ++i) {
    if (dims_[i].width() > w) {
      w = dims_[i].width();
      best = i;
    }
  }
  return best;
}

std::pair<Box, Box> Box::split() const {
  int d = widest_dim();
  double m = dims_[d].mid();
  Box a = *this, b = *this;
  a.dims_[d].hi = m;
  b.dims_[d].lo = m;
  return {a, b};
}

bool Box::operator<(const Box& o) const {
  for (int i = 0; i < std::min(arity(), o.arity()); ++i) {
    if (dims_[i].lo != o.dims_[i].lo) return dims_[i].lo < o.dims_[i].lo;
    if (dims_[i].hi != o.dims_[i].hi) return dims_[i].hi < o.dims_[i].hi;
  }
  return arity() < o.arity();
}

namespace {

// Interval power for closed [lo, hi].
Interval ipow(Interval v, uint32_t e) {
  if (e == 0) return {1.0, 1.0};
  if (e == 1) return v;
  bool even = (e % 2 == 0);
  double plo = std::pow(v.lo, static_cast<double>(e));
  double phi = std::pow(v.hi, static_cast<double>(e));
  if (!even) return {std::min(plo, phi), std::max(plo, phi)};
  if (v.lo >= 0.0) return {plo, phi};
  if (v.hi <= 0.0) return {phi, plo};
  return {0.0, std::max(plo, phi)};
}

double binom(int n, int k) {
  // exact in double for n <= 40
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

struct DenseTensor {
  std::vector<int> degree;   // per-dimension degree
  std::vector<double> coef;  // row-major, dim 0 slowest
  std::vector<double> mag;   // shadow of accumulated magnitudes

  size_t size() const { return coef.size(); }
  size_t stride(int d) const {
    size_t s = 1;
    for (size_t i = d + 1; i < degree.size(); ++i) s *= degree[i] + 1;
    return s;
  }
};

DenseTensor to_dense(const Polynomial& p) {
  int n = p.arity();
  DenseTensor t;
  t.degree.assign(n, 0);
  for (int i = 0; i < n; ++i) t.degree[i] = p.degree_in(i);
  size_t total = 1;
  for (int i = 0; i < n; ++i) total *= t.degree[i] + 1;
  t.coef.assign(total, 0.0);
  t.mag.assign(total, 0.0);
  for (const auto& [e, c] : p.terms()) {
    size_t idx = 0;
    for (int i = 0; i < n; ++i) idx = idx * (t.degree[i] + 1) + e[i];
    t.coef[idx] += c;
    t.mag[idx] += std::fabs(c);
  }
  return t;
}

// In place along dimension d: substitutes x_d = lo + w * t_d, Horner in
// coefficient space. The mag shadow runs the same recurrence on absolute
// values, bounding the magnitudes that flowed into each coefficient.
void affine_shift_dim(DenseTensor& t, int d, double lo, double w) {
  int deg = t.degree[d];
  if (deg == 0) return;
  size_t str = t.stride(d);
  size_t outer = t.size() / ((deg + 1) * str);
  double alo = std::fabs(lo), aw = std::fabs(w);
  std::vector<double> a(deg + 1), m(deg + 1), ra(deg + 1), rm(deg + 1);
  for (size_t o = 0; o < outer; ++o) {
    for (size_t s = 0; s < str; ++s) {
      size_t base = (o * (deg + 1)) * str + s;
      for (int i = 0; i <= deg; ++i) {
        a[i] = t.coef[base + i * str];
        m[i] = t.mag[base + i * str];
      }
      // r(t) = a[deg]; r = r*(lo + w t) + a[i] descending
      std::fill(ra.begin(), ra.end(), 0.0);
      std::fill(rm.begin(), rm.end(), 0.0);
      ra[0] = a[deg];
      rm[0] = m[deg];
      int rdeg = 0;
      for (int i = deg - 1; i >= 0; --i) {
        // multiply r by (lo + w t): new[j] = lo*r[j] + w*r[j-1]
        for (int j = rdeg + 1; j >= 0; --j) {
          double nv = (j <= rdeg ? lo * ra[j] : 0.0) + (j >= 1 ? w * ra[j - 1] : 0.0);
          double nm = (j <= rdeg ? alo * rm[j] : 0.0) + (j >= 1 ? aw * rm[j - 1] : 0.0);
          ra[j] = nv;
          rm[j] = nm;
        }
        ++rdeg;
        ra[0] += a[i];
        rm[0] += m[i];
      }
      for (int i = 0; i <= deg; ++i) {
        t.coef[base + i * str] = ra[i];
        t.mag[base + i * str] = rm[i];
      }
    }
  }
}

// In place along dimension d: power basis -> Bernstein basis on [0,1]:
// b_j = sum_{i<=j} C(j,i)/C(deg,i) a_i.
void bernstein_dim(DenseTensor& t, int d) {
  int deg = t.degree[d];
  if (deg == 0) return;
  size_t str = t.stride(d);
  size_t outer = t.size() / ((deg + 1) * str);
  std::vector<double> a(deg + 1), m(deg + 1), b(deg + 1), bm(deg + 1);
  // ratio[j][i] = C(j,i)/C(deg,i)
  std::vector<std::vector<double>> ratio(deg + 1, std::vector<double>(deg + 1, 0.0));
  for (int j = 0; j <= deg; ++j)
    for (int i = 0; i <= j; ++i) ratio[j][i] = binom(j, i) / binom(deg, i);
  for (size_t o = 0; o < outer; ++o) {
    for (size_t s = 0; s < str; ++s) {
      size_t base = (o * (deg + 1)) * str + s;
      for (int i = 0; i <= deg; ++i) {
        a[i] = t.coef[base + i * str];
        m[i] = t.mag[base + i * str];
      }
      for (int j = 0; j <= deg; ++j) {
        double v = 0.0, vm = 0.0;
        for (int i = 0; i <= j; ++i) {
          v += ratio[j][i] * a[i];
          vm += ratio[j][i] * m[i];
        }
        b[j] = v;
        bm[j] = vm;
      }
      for (int i = 0; i <= deg; ++i) {
        t.coef[base + i * str] = b[i];
        t.mag[base + i * str] = bm[i];
      }
    }
  }
}

// Substitutes constants for degenerate dimensions, returning a polynomial
// over the remaining ones together with the reduced box.
std::pair<Polynomial, Box> drop_degenerate(const Polynomial& p, const Box& box) {
  int n = p.arity();
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (box.dim(i).lo != box.dim(i).hi) keep.push_back(i);
  if (static_cast<int>(keep.size()) == n) return {p, box};
  int m = static_cast<int>(keep.size());
  std::vector<Polynomial> subst;
  subst.reserve(n);
  std::vector<int> pos(n, -1);
  for (int j = 0; j < m; ++j) pos[keep[j]] = j;
  for (int i = 0; i < n; ++i) {
    if (pos[i] >= 0)
      subst.push_back(Polynomial::variable(m, pos[i]));
    else
      subst.push_back(Polynomial::constant(m, box.dim(i).lo));
  }
  Polynomial q = p.compose(subst);
  std::vector<Interval> dims;
  for (int i : keep) dims.push_back(box.dim(i));
  return {q, Box(std::move(dims))};
}

}  // namespace

RangeEnclosure enclose_range_interval(const Polynomial& p, const Box& box) {
  if (p.arity() != box.arity()) throw PolyError("arity mismatch in enclose_range");
  Interval acc{0.0, 0.0};
  double mag = 0.0;
  size_t ops = 1;
  for (const auto& [e, c] : p.terms()) {
    Interval t{c, c};
    for (int i = 0; i < p.arity(); ++i) {
      if (e[i] == 0) continue;
      Interval pw = ipow(box.dim(i), e[i]);
      double a = t.lo * pw.lo, b = t.lo * pw.hi, cc = t.hi * pw.lo, d = t.hi * pw.hi;
      t = {std::min(std::min(a, b), std::min(cc, d)),
           std::max(std::max(a, b), std::max(cc, d))};
      ops += e[i];
    }
    acc.lo += t.lo;
    acc.hi += t.hi;
    mag = std::max(mag, std::max(std::fabs(t.lo), std::fabs(t.hi)));
    ++ops;
  }
  double slack = static_cast<double>(ops) * 4.0 *
                 std::numeric_limits<double>::epsilon() * std::max(1e-300, mag);
  return {acc.lo - slack, acc.hi + slack};
}

RangeEnclosure enclose_range(const Polynomial& p, const Box& box) {
  if (p.arity() != box.arity()) throw PolyError("arity mismatch in enclose_range");
  auto [q, b] = drop_degenerate(p, box);
  if (q.arity() == 0 || q.is_zero()) {
    double v = q.is_zero() ? 0.0 : q.terms().begin()->second;
    return {v, v};
  }
  if (q.total_degree() > kBernsteinDegreeCap) return enclose_range_interval(q, b);

  DenseTensor t = to_dense(q);
  for (int d = 0; d < q.arity(); ++d)
    affine_shift_dim(t, d, b.dim(d).lo, b.dim(d).width());
  for (int d = 0; d < q.arity(); ++d) bernstein_dim(t, d);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double worst_mag = 0.0;
  for (size_t i = 0; i < t.size(); ++i) {
    lo = std::min(lo, t.coef[i]);
    hi = std::max(hi, t.coef[i]);
    worst_mag = std::max(worst_mag, t.mag[i]);
  }
  // outward rounding: the shadow bounds the magnitudes accumulated into
  // any coefficient; the pass count bounds the rounding-error factor
  size_t passes = 8;
  for (int d = 0; d < q.arity(); ++d) passes += 2 * (t.degree[d] + 1);
  double slack = static_cast<double>(passes) *
                 std::numeric_limits<double>::epsilon() * std::max(1e-300, worst_mag);
  return {lo - slack, hi + slack};
}

}  // namespace reachcert

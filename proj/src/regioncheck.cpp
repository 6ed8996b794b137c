#include "reachcert/regioncheck.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace reachcert {

namespace {

struct WorkItem {
  Box box;
  int depth;
};

}  // namespace

CheckOutcome prove_sign(const SignObligation& ob, const CheckSettings& s) {
  if (ob.margin < 0) throw PolyError("negative obligation margin");
  if (ob.region.is_empty()) return CheckOutcome::proved();
  if (ob.region.arity() != ob.poly.arity())
    throw PolyError("obligation region/poly arity mismatch");

  // normalize to >= 0
  Polynomial p = (ob.sense == Sense::GeqZero) ? ob.poly : -ob.poly;
  const double prove_floor = ob.margin - s.eta;
  const double violate_ceil = -s.eta;

  std::vector<Box> frontier;
  const int max_corner_dim = 4;

  for (const auto& piece : ob.region.pieces()) {
    std::vector<WorkItem> stack;
    stack.push_back({piece, 0});
    while (!stack.empty()) {
      WorkItem it = stack.back();
      stack.pop_back();
      RangeEnclosure enc = enclose_range(p, it.box);
      if (enc.lo >= prove_floor) continue;

      // witness candidates: center, then corners (small dimensions only)
      std::vector<std::vector<double>> cands;
      cands.push_back(it.box.center());
      if (it.box.arity() <= max_corner_dim) {
        auto cs = it.box.corners();
        cands.insert(cands.end(), cs.begin(), cs.end());
      }
      for (const auto& x : cands) {
        double v = p.evaluate(x);
        if (v < violate_ceil) {
          Witness w;
          w.point = x;
          w.value = (ob.sense == Sense::GeqZero) ? v : -v;
          return CheckOutcome::disproved(std::move(w));
        }
      }

      if (it.depth >= s.depth_limit || it.box.max_width() == 0.0) {
        if (frontier.size() < s.max_frontier) frontier.push_back(it.box);
        continue;
      }
      auto [a, b] = it.box.split();
      stack.push_back({b, it.depth + 1});
      stack.push_back({a, it.depth + 1});
    }
  }
  if (frontier.empty()) return CheckOutcome::proved();
  return CheckOutcome::unknown(std::move(frontier));
}

double bound_supremum(const Polynomial& p, const RegionSpec& region, int depth_limit) {
  if (region.is_empty()) throw PolyError("bound_supremum on empty region");
  if (region.arity() != p.arity())
    throw PolyError("bound_supremum region/poly arity mismatch");

  struct Node {
    double hi;
    int depth;
    Box box;
  };
  auto cmp = [](const Node& a, const Node& b) {
    if (a.hi != b.hi) return a.hi < b.hi;  // max-heap on upper bound
    return b.box < a.box;                  // deterministic tie-break
  };
  std::priority_queue<Node, std::vector<Node>, decltype(cmp)> heap(cmp);

  for (const auto& piece : region.pieces()) {
    RangeEnclosure e = enclose_range(p, piece);
    heap.push({e.hi, 0, piece});
  }

  // pop budget grows with depth so deeper limits only tighten the answer
  size_t budget = std::min<size_t>(100000, size_t{1} << std::min(depth_limit + 4, 17));
  while (budget-- > 0 && !heap.empty()) {
    Node top = heap.top();
    if (top.depth >= depth_limit || top.box.max_width() == 0.0) break;
    heap.pop();
    auto [a, b] = top.box.split();
    // the parent bound stays valid for each child, so refinement never loosens
    double ha = std::min(enclose_range(p, a).hi, top.hi);
    double hb = std::min(enclose_range(p, b).hi, top.hi);
    heap.push({ha, top.depth + 1, a});
    heap.push({hb, top.depth + 1, b});
  }
  return heap.top().hi;
}

}  // namespace reachcert

#include "reachcert/expectation.hpp"

#include <algorithm>
#include <cmath>

namespace reachcert {

ExpectationOperator::ExpectationOperator(const SystemModel& model,
                                         const Disturbance& dist)
    : model_(model), dist_(dist) {
  dyn_at_.reserve(dist_.size());
  for (const auto& theta : dist_.support) dyn_at_.push_back(model_.dynamics_at(theta));
}

Polynomial ExpectationOperator::post_expectation(const Polynomial& v) const {
  if (v.arity() != model_.state_dim)
    throw PolyError("post_expectation: v arity must equal the state dimension");
  Polynomial acc(model_.state_dim);
  for (size_t j = 0; j < dist_.size(); ++j)
    acc = acc + v.compose(dyn_at_[j]).scaled(dist_.probs[j]);
  return acc;
}

Polynomial ExpectationOperator::k_post_expectation(const Polynomial& v, int k) const {
  if (k < 1) throw PolyError("k_post_expectation requires k >= 1");
  Polynomial cur = v;
  for (int i = 0; i < k; ++i) {
    cur = post_expectation(cur);
    if (cur.total_degree() > kExpectationDegreeCap)
      throw PolyError("k_post_expectation: degree cap exceeded");
  }
  return cur;
}

namespace {

// One branch of the symbolic stopped tree: the state after `steps` steps
// as a polynomial map of the starting point, with the path probability.
struct Branch {
  std::vector<Polynomial> state;  // n polynomials over x
  double weight;
  bool frozen;
};

enum class Regime { Freeze, Advance, Undetermined };

Regime classify(const std::vector<Polynomial>& state, const Box& box,
                const RegionSpec& Xr) {
  int n = static_cast<int>(state.size());
  std::vector<Interval> img(n);
  for (int i = 0; i < n; ++i) {
    RangeEnclosure e = enclose_range(state[i], box);
    img[i] = {e.lo, e.hi};
  }
  Box image(std::move(img));
  if (Xr.covers_box(image)) return Regime::Freeze;
  if (Xr.disjoint_box(image)) return Regime::Advance;
  return Regime::Undetermined;
}

// Expands the stopped tree on `box` into every consistent labeling of
// undetermined branch points. Each alternative is an exact polynomial for
// E[v(stopped_k)]. Returns false when the alternative budget is exceeded
// and the caller should split the box instead.
bool stopped_alternatives(const Polynomial& v, const ProblemSpec& spec,
                          const std::vector<std::vector<Polynomial>>& dyn_at, int k,
                          const Box& box, size_t max_alternatives,
                          std::vector<Polynomial>& out) {
  int n = spec.model.state_dim;
  std::vector<Polynomial> identity;
  for (int i = 0; i < n; ++i) identity.push_back(Polynomial::variable(n, i));

  // alternatives of branch lists, expanded step by step
  std::vector<std::vector<Branch>> alts;
  alts.push_back({Branch{identity, 1.0, false}});

  for (int step = 0; step < k; ++step) {
    std::vector<std::vector<Branch>> next_alts;
    for (const auto& branches : alts) {
      // per-branch options at this step
      std::vector<std::vector<Branch>> options(branches.size());
      for (size_t bi = 0; bi < branches.size(); ++bi) {
        const Branch& br = branches[bi];
        if (br.frozen) {
          options[bi] = {br};
          continue;
        }
        Regime r = classify(br.state, box, spec.Xr);
        std::vector<Branch> opt;
        if (r == Regime::Freeze || r == Regime::Undetermined) {
          Branch f = br;
          f.frozen = true;
          opt.push_back(std::move(f));
        }
        if (r == Regime::Advance || r == Regime::Undetermined) {
          // marker: a non-frozen option expands into support children below
          Branch a = br;
          a.frozen = false;
          opt.push_back(std::move(a));
        }
        if (r == Regime::Undetermined) {
          // two genuine options; alternative count doubles
        }
        options[bi] = std::move(opt);
      }
      // cartesian product over branches
      std::vector<std::vector<Branch>> combos{{}};
      for (size_t bi = 0; bi < branches.size(); ++bi) {
        std::vector<std::vector<Branch>> grown;
        for (const auto& c : combos) {
          for (const auto& o : options[bi]) {
            auto cc = c;
            cc.push_back(o);
            grown.push_back(std::move(cc));
          }
        }
        combos = std::move(grown);
        if (combos.size() * alts.size() > max_alternatives) return false;
      }
      // advance non-frozen branches through every support point
      for (const auto& combo : combos) {
        std::vector<Branch> advanced;
        for (const auto& br : combo) {
          if (br.frozen) {
            advanced.push_back(br);
            continue;
          }
          for (size_t j = 0; j < spec.dist.size(); ++j) {
            Branch child;
            child.weight = br.weight * spec.dist.probs[j];
            child.frozen = false;
            child.state.reserve(n);
            for (int i = 0; i < n; ++i)
              child.state.push_back(dyn_at[j][i].compose(br.state));
            advanced.push_back(std::move(child));
          }
        }
        next_alts.push_back(std::move(advanced));
        if (next_alts.size() > max_alternatives) return false;
      }
    }
    alts = std::move(next_alts);
  }

  out.clear();
  for (const auto& branches : alts) {
    Polynomial e(n == 0 ? 0 : n);
    for (const auto& br : branches) e = e + v.compose(br.state).scaled(br.weight);
    out.push_back(std::move(e));
  }
  return true;
}

// Concrete stopped recursion value at a point: E[v(stopped_k(x))].
double stopped_value_at(const Polynomial& v, const ProblemSpec& spec,
                        const std::vector<std::vector<Polynomial>>& dyn_at, int k,
                        std::span<const double> x) {
  struct Node {
    std::vector<double> state;
    double weight;
  };
  std::vector<Node> nodes{{std::vector<double>(x.begin(), x.end()), 1.0}};
  for (int step = 0; step < k; ++step) {
    std::vector<Node> next;
    for (const auto& nd : nodes) {
      if (spec.Xr.contains_point(nd.state)) {
        next.push_back(nd);
        continue;
      }
      for (size_t j = 0; j < spec.dist.size(); ++j) {
        Node ch;
        ch.weight = nd.weight * spec.dist.probs[j];
        ch.state.resize(spec.model.state_dim);
        for (int i = 0; i < spec.model.state_dim; ++i)
          ch.state[i] = dyn_at[j][i].evaluate(nd.state);
        next.push_back(std::move(ch));
      }
    }
    nodes = std::move(next);
  }
  double acc = 0.0;
  for (const auto& nd : nodes) acc += nd.weight * v.evaluate(nd.state);
  return acc;
}

}  // namespace

CheckOutcome stopped_expectation_check(const Polynomial& v, const ProblemSpec& spec,
                                       int k, const RegionSpec& region,
                                       const CheckSettings& s) {
  if (k < 1) throw PolyError("stopped_expectation_check requires k >= 1");
  if (v.arity() != spec.model.state_dim)
    throw PolyError("stopped_expectation_check: v arity mismatch");
  if (region.is_empty()) return CheckOutcome::proved();

  std::vector<std::vector<Polynomial>> dyn_at;
  for (const auto& theta : spec.dist.support)
    dyn_at.push_back(spec.model.dynamics_at(theta));

  const size_t max_alternatives = 64;
  std::vector<Box> frontier;

  for (const auto& piece : region.pieces()) {
    struct Item {
      Box box;
      int depth;
    };
    std::vector<Item> stack{{piece, 0}};
    while (!stack.empty()) {
      Item it = stack.back();
      stack.pop_back();

      std::vector<Polynomial> alternatives;
      bool expanded = stopped_alternatives(v, spec, dyn_at, k, it.box,
                                           max_alternatives, alternatives);
      bool ok = expanded;
      if (expanded) {
        for (const auto& e : alternatives) {
          Polynomial g = v - e;
          RangeEnclosure enc = enclose_range(g, it.box);
          if (enc.lo < -s.eta) {
            ok = false;
            break;
          }
        }
      }
      if (ok) continue;

      // concrete disproof attempt via the stopped recursion itself
      std::vector<std::vector<double>> cands{it.box.center()};
      if (it.box.arity() <= 4) {
        auto cs = it.box.corners();
        cands.insert(cands.end(), cs.begin(), cs.end());
      }
      for (const auto& x : cands) {
        double val = v.evaluate(x) - stopped_value_at(v, spec, dyn_at, k, x);
        if (val < -s.eta) {
          Witness w;
          w.point = x;
          w.value = val;
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

}  // namespace reachcert

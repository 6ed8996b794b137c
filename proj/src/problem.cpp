#include "reachcert/problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace reachcert {

using nlohmann::json;

void Disturbance::validate(int dist_dim) const {
  if (support.empty()) throw SpecError("disturbance support is empty");
  if (support.size() != probs.size())
    throw SpecError("support and probs have different lengths");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p > 0.0)) throw SpecError("disturbance probability must be positive");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-12) throw SpecError("distribution not normalized");
  for (const auto& pt : support)
    if (static_cast<int>(pt.size()) != dist_dim)
      throw SpecError("support point dimension mismatch");
  for (size_t i = 0; i < support.size(); ++i)
    for (size_t j = i + 1; j < support.size(); ++j)
      if (support[i] == support[j]) throw SpecError("duplicate support point");
}

void SystemModel::validate() const {
  if (state_dim <= 0) throw SpecError("state dimension must be positive");
  if (dist_dim < 0) throw SpecError("negative disturbance dimension");
  if (static_cast<int>(dynamics.size()) != state_dim)
    throw SpecError("dynamics component count must equal the state dimension");
  for (const auto& f : dynamics)
    if (f.arity() != state_dim + dist_dim)
      throw SpecError("dynamics component arity must be state_dim + dist_dim");
}

std::vector<Polynomial> SystemModel::dynamics_at(const std::vector<double>& theta) const {
  std::vector<Polynomial> subst;
  subst.reserve(state_dim + dist_dim);
  for (int i = 0; i < state_dim; ++i)
    subst.push_back(Polynomial::variable(state_dim, i));
  for (int j = 0; j < dist_dim; ++j)
    subst.push_back(Polynomial::constant(state_dim, theta[j]));
  std::vector<Polynomial> out;
  out.reserve(state_dim);
  for (const auto& f : dynamics) out.push_back(f.compose(subst));
  return out;
}

std::vector<double> SystemModel::step(std::span<const double> x,
                                      const std::vector<double>& theta) const {
  std::vector<double> xt(x.begin(), x.end());
  xt.insert(xt.end(), theta.begin(), theta.end());
  std::vector<double> out(state_dim);
  for (int i = 0; i < state_dim; ++i) out[i] = dynamics[i].evaluate(xt);
  return out;
}

RegionSpec ProblemSpec::xhat_minus_x() const {
  if (mode != ReachMode::Xhat || !Xhat) return RegionSpec::empty();
  return region_difference(*Xhat, X);
}

void ProblemSpec::validate() const {
  model.validate();
  dist.validate(model.dist_dim);
  if (X.is_empty()) throw SpecError("X must be non-empty");
  if (X0.is_empty()) throw SpecError("X0 must be non-empty");
  if (Xr.is_empty()) throw SpecError("Xr must be non-empty");
  for (const RegionSpec* r : {&X, &X0, &Xr})
    if (r->arity() != model.state_dim)
      throw SpecError("region arity must equal the state dimension");
  if (!region_subset(X0, X)) throw SpecError("X0 not contained in X");
  if (!region_subset(Xr, X)) throw SpecError("Xr not contained in X");
  if (mode == ReachMode::Xhat) {
    if (!Xhat) throw SpecError("mode xhat requires Xhat");
    if (Xhat->arity() != model.state_dim)
      throw SpecError("Xhat arity must equal the state dimension");
    if (!region_subset(X, *Xhat)) throw SpecError("X not contained in Xhat");
  }
}

namespace {

RegionSpec region_from_json(const json& j, const std::string& name) {
  if (!j.is_array()) throw SpecError(name + " must be a list of boxes");
  std::vector<Box> pieces;
  for (const auto& jb : j) {
    if (!jb.is_array() || jb.empty())
      throw SpecError(name + ": a box must be a non-empty list of [lo,hi] pairs");
    std::vector<Interval> dims;
    for (const auto& jp : jb) {
      if (!jp.is_array() || jp.size() != 2)
        throw SpecError(name + ": box entry is not a [lo,hi] pair");
      double lo = jp[0].get<double>(), hi = jp[1].get<double>();
      if (!(lo <= hi)) throw SpecError(name + ": box has lo > hi");
      dims.push_back({lo, hi});
    }
    pieces.push_back(Box(std::move(dims)));
  }
  return RegionSpec(std::move(pieces));
}

// Bounding box of X inflated to cover the one-step images of X \ Xr.
RegionSpec default_xhat(const ProblemSpec& spec) {
  Box bb = spec.X.bounding_box();
  std::vector<Interval> dims = bb.dims();
  for (const auto& piece : spec.outside_target().pieces()) {
    for (size_t j = 0; j < spec.dist.size(); ++j) {
      auto fx = spec.model.dynamics_at(spec.dist.support[j]);
      for (int i = 0; i < spec.model.state_dim; ++i) {
        RangeEnclosure e = enclose_range(fx[i], piece);
        dims[i].lo = std::min(dims[i].lo, e.lo);
        dims[i].hi = std::max(dims[i].hi, e.hi);
      }
    }
  }
  return RegionSpec::single(Box(std::move(dims)));
}

}  // namespace

ProblemSpec problem_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("problem file parse error: ") + e.what());
  }

  ProblemSpec spec;
  try {
    spec.state_vars = j.at("state_vars").get<std::vector<std::string>>();
    spec.dist_vars = j.value("dist_vars", std::vector<std::string>{});
    spec.model.state_dim = static_cast<int>(spec.state_vars.size());
    spec.model.dist_dim = static_cast<int>(spec.dist_vars.size());

    std::vector<std::string> all_vars = spec.state_vars;
    all_vars.insert(all_vars.end(), spec.dist_vars.begin(), spec.dist_vars.end());
    for (const auto& s : j.at("dynamics").get<std::vector<std::string>>())
      spec.model.dynamics.push_back(parse_poly(s, all_vars));

    spec.dist.support = j.at("support").get<std::vector<std::vector<double>>>();
    spec.dist.probs = j.at("probs").get<std::vector<double>>();

    spec.X = region_from_json(j.at("X"), "X");
    spec.X0 = region_from_json(j.at("X0"), "X0");
    spec.Xr = region_from_json(j.at("Xr"), "Xr");
    if (j.contains("Xhat")) spec.Xhat = region_from_json(j.at("Xhat"), "Xhat");

    std::string mode = j.value("mode", "assumed-invariant");
    if (mode == "assumed-invariant")
      spec.mode = ReachMode::AssumedInvariant;
    else if (mode == "xhat")
      spec.mode = ReachMode::Xhat;
    else
      throw SpecError("mode must be 'assumed-invariant' or 'xhat'");
  } catch (const json::exception& e) {
    throw SpecError(std::string("problem file schema error: ") + e.what());
  }

  if (spec.mode == ReachMode::Xhat && !spec.Xhat) {
    spec.model.validate();
    spec.dist.validate(spec.model.dist_dim);
    spec.Xhat = default_xhat(spec);
    spec.xhat_defaulted = true;
  }
  spec.validate();
  return spec;
}

ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot open problem file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return problem_from_json_text(ss.str());
}

namespace {

struct ImageWork {
  Box box;
  int depth;
};

// Proves f(piece, theta_j) inside `target` for one support point.
// Returns Proved / Disproved(witness x) / Unknown.
CheckOutcome image_contained(const std::vector<Polynomial>& fx, const Box& root,
                             const RegionSpec& target, const RegionSpec& source_check,
                             int depth_limit) {
  int n = static_cast<int>(fx.size());
  std::vector<Box> frontier;
  std::vector<ImageWork> stack{{root, 0}};
  while (!stack.empty()) {
    ImageWork it = stack.back();
    stack.pop_back();
    std::vector<Interval> img(n);
    for (int i = 0; i < n; ++i) {
      RangeEnclosure e = enclose_range(fx[i], it.box);
      img[i] = {e.lo, e.hi};
    }
    if (target.covers_box(Box(std::move(img)))) continue;

    std::vector<std::vector<double>> cands{it.box.center()};
    if (it.box.arity() <= 4) {
      auto cs = it.box.corners();
      cands.insert(cands.end(), cs.begin(), cs.end());
    }
    for (const auto& x : cands) {
      if (!source_check.contains_point(x)) continue;
      std::vector<double> y(n);
      for (int i = 0; i < n; ++i) y[i] = fx[i].evaluate(x);
      if (!target.contains_point(y)) {
        Witness w;
        w.point = x;
        w.value = 0.0;
        return CheckOutcome::disproved(std::move(w));
      }
    }
    if (it.depth >= depth_limit || it.box.max_width() == 0.0) {
      if (frontier.size() < 64) frontier.push_back(it.box);
      continue;
    }
    auto [a, b] = it.box.split();
    stack.push_back({b, it.depth + 1});
    stack.push_back({a, it.depth + 1});
  }
  if (frontier.empty()) return CheckOutcome::proved();
  return CheckOutcome::unknown(std::move(frontier));
}

CheckOutcome images_contained(const ProblemSpec& spec, const RegionSpec& source,
                              const RegionSpec& target, int depth_limit) {
  std::vector<Box> frontier;
  for (size_t j = 0; j < spec.dist.size(); ++j) {
    auto fx = spec.model.dynamics_at(spec.dist.support[j]);
    for (const auto& piece : source.pieces()) {
      CheckOutcome oc = image_contained(fx, piece, target, source, depth_limit);
      if (oc.status == Status::Disproved) {
        oc.witness->support_index = static_cast<int>(j);
        return oc;
      }
      if (oc.status == Status::Unknown)
        frontier.insert(frontier.end(), oc.frontier.begin(), oc.frontier.end());
    }
  }
  if (frontier.empty()) return CheckOutcome::proved();
  return CheckOutcome::unknown(std::move(frontier));
}

}  // namespace

CheckOutcome check_assumption1(const ProblemSpec& spec, int depth_limit) {
  return images_contained(spec, spec.X, spec.X, depth_limit);
}

CheckOutcome check_xhat_invariance(const ProblemSpec& spec, int depth_limit) {
  if (spec.mode != ReachMode::Xhat || !spec.Xhat)
    return CheckOutcome::proved();
  if (!region_subset(spec.X, *spec.Xhat)) {
    Witness w;
    w.point = spec.X.pieces()[0].center();
    return CheckOutcome::disproved(std::move(w));
  }
  return images_contained(spec, spec.outside_target(), *spec.Xhat, depth_limit);
}

}  // namespace reachcert

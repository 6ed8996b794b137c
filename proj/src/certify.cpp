#include "reachcert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace reachcert {

using nlohmann::json;

std::string prop_name(Prop p) {
  switch (p) {
    case Prop::P1: return "P1";
    case Prop::P2: return "P2";
    case Prop::P3: return "P3";
    case Prop::P4: return "P4";
    case Prop::P5: return "P5";
    case Prop::P6: return "P6";
    case Prop::P7: return "P7";
    case Prop::P8: return "P8";
    case Prop::P9: return "P9";
    case Prop::P10: return "P10";
    case Prop::P11: return "P11";
    case Prop::P12: return "P12";
    case Prop::P13: return "P13";
    case Prop::P14: return "P14";
    case Prop::P15: return "P15";
    case Prop::P6Xhat: return "P6-xhat";
    case Prop::P14Alpha: return "P14-alpha";
  }
  return "?";
}

Prop parse_prop(const std::string& name) {
  for (Prop p : all_props())
    if (prop_name(p) == name) return p;
  throw SpecError("unknown proposition id: " + name);
}

std::vector<Prop> all_props() {
  return {Prop::P1,  Prop::P2,  Prop::P3,  Prop::P4,  Prop::P5,  Prop::P6,
          Prop::P7,  Prop::P8,  Prop::P9,  Prop::P10, Prop::P11, Prop::P12,
          Prop::P13, Prop::P14, Prop::P15, Prop::P6Xhat, Prop::P14Alpha};
}

std::string region_kind_name(RegionKind k) {
  switch (k) {
    case RegionKind::X0: return "X0";
    case RegionKind::X: return "X";
    case RegionKind::OutsideTarget: return "X\\Xr";
    case RegionKind::Target: return "Xr";
    case RegionKind::Boundary: return "dX\\dXr";
    case RegionKind::OutsideX: return "Xhat\\X";
  }
  return "?";
}

bool requires_assumption1(Prop p) {
  switch (p) {
    case Prop::P6Xhat:
    case Prop::P8:
    case Prop::P9:
    case Prop::P10:
    case Prop::P11:
    case Prop::P12:
      return false;
    default:
      return true;
  }
}

bool uses_w(Prop p) {
  switch (p) {
    case Prop::P6:
    case Prop::P6Xhat:
    case Prop::P7:
    case Prop::P8:
    case Prop::P13:
    case Prop::P14:
    case Prop::P14Alpha:
    case Prop::P15:
      return true;
    default:
      return false;
  }
}

BoundKind bound_kind(Prop p) {
  switch (p) {
    case Prop::P2:
    case Prop::P5:
    case Prop::P6:
    case Prop::P6Xhat:
    case Prop::P9:
    case Prop::P13:
      return BoundKind::Lower;
    case Prop::P3:
      return BoundKind::AlmostSure;
    default:
      return BoundKind::Upper;
  }
}

bool uses_primed_threshold(Prop p) {
  switch (p) {
    case Prop::P4:
    case Prop::P5:
    case Prop::P10:
    case Prop::P11:
    case Prop::P12:
    case Prop::P13:
    case Prop::P14:
    case Prop::P14Alpha:
    case Prop::P15:
      return true;
    default:
      return false;
  }
}

namespace {

double need(const std::optional<double>& v, const char* name) {
  if (!v) throw SpecError(std::string("missing parameter: ") + name);
  return *v;
}

int need_int(const std::optional<int>& v, const char* name) {
  if (!v) throw SpecError(std::string("missing parameter: ") + name);
  return *v;
}

double need_threshold(Prop p, const CertParams& params) {
  double t = uses_primed_threshold(p) ? need(params.eps_prime, "eps_prime")
                                      : need(params.eps, "eps");
  if (t < 0.0 || t > 1.0) throw SpecError("threshold must lie in [0,1]");
  return t;
}

}  // namespace

std::vector<ObSpec> compile_obligation_specs(Prop p, const CertParams& params,
                                             double strict_margin) {
  std::vector<ObSpec> obs;
  auto add = [&obs](std::string label, RegionKind r, std::vector<LinTerm> terms,
                    double eps_coef = 0.0, double cst = 0.0, double margin = 0.0,
                    bool stopped = false) {
    obs.push_back({std::move(label), r, std::move(terms), eps_coef, cst, margin, stopped});
  };
  const LinTerm v{+1, OpK::Id, FnK::V};
  const LinTerm mv{-1, OpK::Id, FnK::V};
  const LinTerm tv{+1, OpK::T, FnK::V};
  const LinTerm mtv{-1, OpK::T, FnK::V};
  const LinTerm tkv{+1, OpK::Tk, FnK::V};
  const LinTerm mtkv{-1, OpK::Tk, FnK::V};
  const LinTerm w{+1, OpK::Id, FnK::W};
  const LinTerm mw{-1, OpK::Id, FnK::W};
  const LinTerm tw{+1, OpK::T, FnK::W};
  const LinTerm mtw{-1, OpK::T, FnK::W};
  const LinTerm tkw{+1, OpK::Tk, FnK::W};
  const LinTerm mtkw{-1, OpK::Tk, FnK::W};

  switch (p) {
    case Prop::P1: {
      need_threshold(p, params);
      add("init", RegionKind::X0, {mv}, +1.0);
      add("target", RegionKind::Target, {v}, 0.0, -1.0);
      add("supermartingale", RegionKind::X, {v, mtv});
      add("nonneg", RegionKind::X, {v});
      break;
    }
    case Prop::P2: {
      need_threshold(p, params);
      double delta = need(params.delta, "delta");
      if (!(delta > 0)) throw SpecError("delta must be positive");
      add("init", RegionKind::X0, {mv}, -1.0, +1.0);
      add("boundary", RegionKind::Boundary, {v}, 0.0, -1.0);
      add("drift", RegionKind::OutsideTarget, {v, mtv}, 0.0, -delta);
      add("nonneg", RegionKind::X, {v});
      break;
    }
    case Prop::P3: {
      double c = need(params.c, "c");
      if (!(c > 0)) throw SpecError("c must be positive for P3");
      add("level-outside", RegionKind::OutsideTarget, {v}, 0.0, -c);
      add("level-target", RegionKind::Target, {mv}, 0.0, +c, strict_margin);
      add("unit-drift", RegionKind::OutsideTarget, {v, mtv}, 0.0, -1.0);
      add("nonneg", RegionKind::X, {v});
      break;
    }
    case Prop::P4: {
      need_threshold(p, params);
      double c = need(params.c, "c");
      if (c < 0) throw SpecError("c must be nonnegative");
      need_int(params.k, "k");
      add("init", RegionKind::X0, {mv}, +1.0);
      add("target", RegionKind::Target, {v}, 0.0, -1.0);
      add("c-step", RegionKind::X, {v, mtv}, 0.0, +c);
      add("k-step", RegionKind::X, {v, mtkv});
      add("nonneg", RegionKind::X, {v});
      break;
    }
    case Prop::P5: {
      need_threshold(p, params);
      double c = need(params.c, "c");
      double delta = need(params.delta, "delta");
      if (c < 0) throw SpecError("c must be nonnegative");
      if (!(delta > 0)) throw SpecError("delta must be positive");
      need_int(params.k, "k");
      add("init", RegionKind::X0, {mv}, +1.0);
      add("boundary", RegionKind::Boundary, {v}, 0.0, -1.0);
      add("c-step", RegionKind::OutsideTarget, {v, mtv}, 0.0, +c);
      add("k-drift", RegionKind::OutsideTarget, {v, mtkv}, 0.0, -delta);
      add("nonneg", RegionKind::X, {v});
      break;
    }
    case Prop::P6:
    case Prop::P6Xhat: {
      need_threshold(p, params);
      add("init", RegionKind::X0, {v}, -1.0);
      add("submartingale", RegionKind::OutsideTarget, {mv, tv});
      add("w-drift", RegionKind::OutsideTarget, {mv, tw, mw});
      add("target-cap", RegionKind::Target, {mv}, 0.0, +1.0);
      if (p == Prop::P6Xhat) add("outside-cap", RegionKind::OutsideX, {mv});
      break;
    }
    case Prop::P7:
    case Prop::P8: {
      need_threshold(p, params);
      add("init", RegionKind::X0, {mv}, +1.0);
      add("supermartingale", RegionKind::OutsideTarget, {v, mtv});
      add("w-drift", RegionKind::OutsideTarget, {v, mtw, w});
      add("target", RegionKind::Target, {v}, 0.0, -1.0);
      if (p == Prop::P8) add("outside-nonneg", RegionKind::OutsideX, {v});
      break;
    }
    case Prop::P9: {
      need_threshold(p, params);
      double lam = need(params.lambda, "lambda");
      if (!(lam > 0)) throw SpecError("lambda must be positive");
      add("init", RegionKind::X0, {v}, -1.0);
      add("lambda-drift", RegionKind::OutsideTarget,
          {{-(1.0 + lam), OpK::Id, FnK::V}, {+lam, OpK::T, FnK::V}});
      add("target-cap", RegionKind::Target, {mv}, 0.0, +1.0);
      add("outside-cap", RegionKind::OutsideX, {mv});
      break;
    }
    case Prop::P10: {
      need_threshold(p, params);
      double lam = need(params.lambda, "lambda");
      if (!(lam > 0)) throw SpecError("lambda must be positive");
      need_int(params.N, "N");
      add("init", RegionKind::X0, {mv}, +1.0);
      add("lambda-drift", RegionKind::OutsideTarget,
          {{+(1.0 + lam), OpK::Id, FnK::V}, {-lam, OpK::T, FnK::V}});
      add("target", RegionKind::Target, {v}, 0.0, -1.0);
      add("outside-nonneg", RegionKind::OutsideX, {v});
      break;
    }
    case Prop::P11:
    case Prop::P12: {
      need_threshold(p, params);
      double at = need(params.alpha_tilde, "alpha_tilde");
      double bt = need(params.beta_tilde, "beta_tilde");
      if (p == Prop::P11 && !(at > 0 && at <= 1))
        throw SpecError("alpha_tilde must lie in (0,1]");
      if (p == Prop::P12 && !(at > 0 && at < 1))
        throw SpecError("alpha_tilde must lie in (0,1)");
      if (!(bt >= 0 && bt < 1)) throw SpecError("beta_tilde must lie in [0,1)");
      need_int(params.N, "N");
      add("init", RegionKind::X0, {mv}, +1.0);
      add("alpha-drift", RegionKind::OutsideTarget,
          {{+1, OpK::Id, FnK::V}, {-at, OpK::T, FnK::V}}, 0.0, +at * bt);
      add("target", RegionKind::Target, {v}, 0.0, -1.0);
      if (p == Prop::P11) {
        add("nonneg", RegionKind::OutsideTarget, {v});
        add("outside-nonneg", RegionKind::OutsideX, {v});
      } else {
        add("outside-floor", RegionKind::OutsideX, {v}, 0.0, +at * bt / (1.0 - at));
      }
      break;
    }
    case Prop::P13: {
      need_threshold(p, params);
      need_int(params.k, "k");
      add("init", RegionKind::X0, {v}, +1.0, -1.0);
      add("k-submartingale", RegionKind::OutsideTarget, {mv, tkv});
      add("k-w-drift", RegionKind::OutsideTarget, {mv, tkw, mw});
      add("target-cap", RegionKind::Target, {mv}, 0.0, +1.0);
      break;
    }
    case Prop::P14:
    case Prop::P14Alpha: {
      need_threshold(p, params);
      need_int(params.k, "k");
      if (p == Prop::P14) {
        double c = need(params.c, "c");
        if (c < 0) throw SpecError("c must be nonnegative");
        add("init", RegionKind::X0, {mv}, +1.0);
        add("c-step", RegionKind::X, {v, mtv}, 0.0, +c);
      } else {
        double alpha = need(params.alpha, "alpha");
        if (!(alpha > 0)) throw SpecError("alpha must be positive");
        add("init", RegionKind::X0, {mv}, +1.0);
        add("alpha-step", RegionKind::X, {{+alpha, OpK::Id, FnK::V}, mtv});
      }
      add("k-supermartingale", RegionKind::OutsideTarget, {v, mtkv});
      add("k-w-drift", RegionKind::OutsideTarget, {v, mtkw, w});
      add("target", RegionKind::Target, {v}, 0.0, -1.0);
      break;
    }
    case Prop::P15: {
      need_threshold(p, params);
      double c = need(params.c, "c");
      if (c < 0) throw SpecError("c must be nonnegative");
      need_int(params.k, "k");
      add("init", RegionKind::X0, {mv}, +1.0);
      add("c-step", RegionKind::OutsideTarget, {v, mtv}, 0.0, +c);
      add("stopped-k", RegionKind::X, {}, 0.0, 0.0, 0.0, true);
      add("w-drift", RegionKind::OutsideTarget, {v, mtw, w});
      add("target", RegionKind::Target, {v}, 0.0, -1.0);
      break;
    }
  }
  return obs;
}

BoundInfo certified_bound(Prop p, const CertParams& params) {
  auto kk = [&]() {
    int k = need_int(params.k, "k");
    if (k < 1) throw SpecError("k must be at least 1");
    return k;
  };
  switch (p) {
    case Prop::P1:
      return {BoundKind::Upper, need_threshold(p, params), std::nullopt};
    case Prop::P2:
      return {BoundKind::Lower, need_threshold(p, params), std::nullopt};
    case Prop::P3:
      return {BoundKind::AlmostSure, 1.0, std::nullopt};
    case Prop::P4: {
      int k = kk();
      double c = need(params.c, "c");
      return {BoundKind::Upper,
              k * need_threshold(p, params) + k * (k - 1) * c / 2.0, std::nullopt};
    }
    case Prop::P5: {
      int k = kk();
      double c = need(params.c, "c");
      return {BoundKind::Lower,
              1.0 - k * need_threshold(p, params) - k * (k - 1) * c / 2.0,
              std::nullopt};
    }
    case Prop::P6:
    case Prop::P6Xhat:
    case Prop::P9:
      return {BoundKind::Lower, need_threshold(p, params), std::nullopt};
    case Prop::P7:
    case Prop::P8:
      return {BoundKind::Upper, need_threshold(p, params), std::nullopt};
    case Prop::P10: {
      double lam = need(params.lambda, "lambda");
      if (!(lam > 0)) throw SpecError("lambda must be positive");
      int N = need_int(params.N, "N");
      if (N < 0) throw SpecError("N must be nonnegative");
      double factor = std::pow((1.0 + lam) / lam, N);
      return {BoundKind::Upper, factor * need_threshold(p, params), N};
    }
    case Prop::P11: {
      double at = need(params.alpha_tilde, "alpha_tilde");
      double bt = need(params.beta_tilde, "beta_tilde");
      if (!(at > 0 && at <= 1)) throw SpecError("alpha_tilde must lie in (0,1]");
      if (!(bt >= 0 && bt < 1)) throw SpecError("beta_tilde must lie in [0,1)");
      int N = need_int(params.N, "N");
      if (N < 0) throw SpecError("N must be nonnegative");
      double e = need_threshold(p, params);
      if (at == 1.0) return {BoundKind::Upper, e + bt * N, N};
      double atmN = std::pow(at, -N);
      return {BoundKind::Upper, e * atmN + (1.0 - atmN) * at * bt / (at - 1.0), N};
    }
    case Prop::P12: {
      double at = need(params.alpha_tilde, "alpha_tilde");
      double bt = need(params.beta_tilde, "beta_tilde");
      if (!(at > 0 && at < 1)) throw SpecError("alpha_tilde must lie in (0,1)");
      if (!(bt >= 0 && bt < 1)) throw SpecError("beta_tilde must lie in [0,1)");
      int N = need_int(params.N, "N");
      if (N < 0) throw SpecError("N must be nonnegative");
      double e = need_threshold(p, params);
      double atmN = std::pow(at, -N);
      return {BoundKind::Upper,
              (e * atmN * (1.0 - at) + at * bt * atmN) / (1.0 + at * bt - at), N};
    }
    case Prop::P13:
      kk();
      return {BoundKind::Lower, 1.0 - need_threshold(p, params), std::nullopt};
    case Prop::P14: {
      int k = kk();
      double c = need(params.c, "c");
      return {BoundKind::Upper,
              k * need_threshold(p, params) + k * (k - 1) * c / 2.0, std::nullopt};
    }
    case Prop::P14Alpha: {
      int k = kk();
      double alpha = need(params.alpha, "alpha");
      if (!(alpha > 0)) throw SpecError("alpha must be positive");
      double e = need_threshold(p, params);
      if (alpha == 1.0) return {BoundKind::Upper, k * e, std::nullopt};
      return {BoundKind::Upper,
              e * (1.0 - std::pow(alpha, k)) / (1.0 - alpha), std::nullopt};
    }
    case Prop::P15: {
      int k = kk();
      double c = need(params.c, "c");
      return {BoundKind::Upper, need_threshold(p, params) + (k - 1) * c / 2.0,
              std::nullopt};
    }
  }
  throw SpecError("unhandled proposition");
}

namespace {

RegionSpec region_for(RegionKind k, const ProblemSpec& spec) {
  switch (k) {
    case RegionKind::X0: return spec.X0;
    case RegionKind::X: return spec.X;
    case RegionKind::OutsideTarget: return spec.outside_target();
    case RegionKind::Target: return spec.Xr;
    case RegionKind::Boundary: return boundary_faces(spec.X, spec.Xr);
    case RegionKind::OutsideX: return spec.xhat_minus_x();
  }
  throw SpecError("unhandled region kind");
}

}  // namespace

std::vector<CompiledObligation> compile_obligations(Prop p, const Certificate& cert,
                                                    const ProblemSpec& spec) {
  if (cert.v.arity() != spec.model.state_dim)
    throw SpecError("certificate v arity must equal the state dimension");
  Polynomial w = cert.w.value_or(Polynomial::zero(spec.model.state_dim));
  if (w.arity() != spec.model.state_dim)
    throw SpecError("certificate w arity must equal the state dimension");

  auto specs = compile_obligation_specs(p, cert.params);
  double threshold = uses_primed_threshold(p) ? *cert.params.eps_prime
                                              : (cert.params.eps ? *cert.params.eps : 0.0);
  if (p == Prop::P3) threshold = 0.0;

  ExpectationOperator T(spec.model, spec.dist);
  int k = cert.params.k.value_or(1);

  // lazily computed operator images
  std::optional<Polynomial> Tv, Tkv, Tw, Tkw;
  auto get = [&](OpK op, FnK fn) -> const Polynomial& {
    switch (op) {
      case OpK::Id:
        return fn == FnK::V ? cert.v : w;
      case OpK::T: {
        auto& slot = (fn == FnK::V) ? Tv : Tw;
        if (!slot) slot = T.post_expectation(fn == FnK::V ? cert.v : w);
        return *slot;
      }
      case OpK::Tk: {
        auto& slot = (fn == FnK::V) ? Tkv : Tkw;
        if (!slot) slot = T.k_post_expectation(fn == FnK::V ? cert.v : w, k);
        return *slot;
      }
    }
    throw SpecError("unhandled operator kind");
  };

  std::vector<CompiledObligation> out;
  for (const auto& os : specs) {
    CompiledObligation co;
    co.stopped = os.stopped;
    co.k = k;
    co.region_kind = os.region;
    co.sign.label = os.label;
    co.sign.sense = Sense::GeqZero;
    co.sign.margin = os.margin;
    co.sign.region = region_for(os.region, spec);
    if (os.stopped) {
      co.sign.poly = cert.v;  // the check consumes v directly
    } else {
      Polynomial acc = Polynomial::constant(spec.model.state_dim,
                                            os.const_term + os.eps_coef * threshold);
      for (const auto& t : os.terms) acc = acc + get(t.op, t.fn).scaled(t.coef);
      co.sign.poly = std::move(acc);
    }
    out.push_back(std::move(co));
  }
  return out;
}

bool CertReport::all_proved() const {
  for (const auto& o : obligations)
    if (o.outcome.status != Status::Proved) return false;
  return !obligations.empty();
}

bool CertReport::any_disproved() const {
  for (const auto& o : obligations)
    if (o.outcome.status == Status::Disproved) return true;
  return false;
}

CertReport check_certificate(Prop p, const Certificate& cert, const ProblemSpec& spec,
                             const CheckSettings& settings) {
  // resolve the P6 variant against the problem mode
  Prop effective = p;
  if (p == Prop::P6 && spec.mode == ReachMode::Xhat) effective = Prop::P6Xhat;
  if (p == Prop::P6Xhat && spec.mode == ReachMode::AssumedInvariant) effective = Prop::P6;

  CertReport report;
  report.prop = effective;
  report.eta = settings.eta;
  report.depth = settings.depth_limit;
  report.semantics =
      spec.mode == ReachMode::Xhat ? "reach-avoid" : "reach-invariant";

  if (requires_assumption1(effective)) {
    if (spec.mode == ReachMode::Xhat)
      throw SpecError(prop_name(effective) +
                      " requires the invariance assumption; in xhat mode use "
                      "P6-xhat or P8-P12");
    CheckOutcome a1 = check_assumption1(spec, settings.depth_limit);
    if (a1.status != Status::Proved)
      throw SpecError("invariance of X is " +
                      std::string(to_string(a1.status)) + "; " +
                      prop_name(effective) +
                      " needs it - consider P6-xhat or P8-P12 with an Xhat set");
    report.assumptions_used.push_back("assumption1=Proved");
  } else if (spec.mode == ReachMode::AssumedInvariant) {
    // Xhat-family propositions fall back to Xhat == X, which needs invariance
    CheckOutcome a1 = check_assumption1(spec, settings.depth_limit);
    if (a1.status != Status::Proved)
      throw SpecError("in assumed-invariant mode " + prop_name(effective) +
                      " takes Xhat = X, which requires proved invariance");
    report.assumptions_used.push_back("assumption1=Proved");
    report.assumptions_used.push_back("xhat=X");
  } else {
    CheckOutcome inv = check_xhat_invariance(spec, settings.depth_limit);
    if (inv.status != Status::Proved)
      throw SpecError("Xhat does not provably contain the one-step images of "
                      "X\\Xr; enlarge Xhat");
    report.assumptions_used.push_back("xhat-invariance=Proved");
    if (spec.xhat_defaulted) report.assumptions_used.push_back("xhat=defaulted");
  }

  BoundInfo bound = certified_bound(effective, cert.params);  // validates ranges
  auto obligations = compile_obligations(effective, cert, spec);

  bool all_proved = true;
  for (auto& co : obligations) {
    ObligationResult r;
    r.label = co.sign.label;
    r.margin = co.sign.margin;
    r.region = co.region_kind;
    CheckOutcome oc;
    if (co.stopped)
      oc = stopped_expectation_check(cert.v, spec, co.k, co.sign.region, settings);
    else
      oc = prove_sign(co.sign, settings);
    if (oc.status != Status::Proved) all_proved = false;
    r.outcome = std::move(oc);
    report.obligations.push_back(std::move(r));
  }
  if (all_proved) report.bound = bound;
  if (effective == Prop::P15)
    report.notes.push_back("p15-bound-direction=upper-per-statement");
  return report;
}

Polynomial dualize(const Polynomial& v) {
  return Polynomial::constant(v.arity(), 1.0) - v;
}

Certificate embed_zero_w(const Certificate& p1, const ProblemSpec& spec,
                         const CheckSettings& settings) {
  CertReport r = check_certificate(Prop::P1, p1, spec, settings);
  if (!r.all_proved())
    throw SpecError("embed_zero_w precondition unverified: P1 check did not prove");
  Certificate out(p1.v);
  out.w = Polynomial::zero(p1.v.arity());
  out.params.eps = p1.params.eps;
  return out;
}

Certificate embed_supermartingale(const Certificate& p2, const ProblemSpec& spec,
                                  double sup_bound, const CheckSettings& settings) {
  double delta = p2.params.delta.value_or(0.0);
  if (!(delta > 0)) throw SpecError("embed_supermartingale requires delta > 0");
  if (!std::isfinite(sup_bound))
    throw SpecError("embed_supermartingale requires a finite sup bound");
  CertReport r = check_certificate(Prop::P2, p2, spec, settings);
  if (!r.all_proved())
    throw SpecError("embed_supermartingale precondition unverified: P2 check did not prove");

  double M = 2.0 * std::ceil(std::max(1.0, sup_bound) / delta);
  Polynomial u = dualize(p2.v);
  Certificate out(u);
  out.w = u.scaled(M);
  out.params.eps = p2.params.eps;
  out.params.M = M;
  return out;
}

namespace {

CertParams params_from_json(const json& j) {
  CertParams p;
  if (!j.is_object()) throw SpecError("params must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key == "k")
      p.k = it.value().get<int>();
    else if (key == "N")
      p.N = it.value().get<int>();
    else if (key == "c")
      p.c = it.value().get<double>();
    else if (key == "delta")
      p.delta = it.value().get<double>();
    else if (key == "lambda")
      p.lambda = it.value().get<double>();
    else if (key == "alpha_tilde")
      p.alpha_tilde = it.value().get<double>();
    else if (key == "beta_tilde")
      p.beta_tilde = it.value().get<double>();
    else if (key == "alpha")
      p.alpha = it.value().get<double>();
    else if (key == "eps")
      p.eps = it.value().get<double>();
    else if (key == "eps_prime")
      p.eps_prime = it.value().get<double>();
    else if (key == "M")
      p.M = it.value().get<double>();
    else
      throw SpecError("unknown parameter: " + key);
  }
  return p;
}

}  // namespace

LoadedCertificate certificate_from_json_text(const std::string& text,
                                             const std::vector<std::string>& state_vars) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("certificate file parse error: ") + e.what());
  }
  try {
    Prop prop = parse_prop(j.at("prop").get<std::string>());
    Certificate cert(parse_poly(j.at("v").get<std::string>(), state_vars));
    if (j.contains("w"))
      cert.w = parse_poly(j.at("w").get<std::string>(), state_vars);
    if (j.contains("params")) cert.params = params_from_json(j.at("params"));
    return {prop, std::move(cert)};
  } catch (const json::exception& e) {
    throw SpecError(std::string("certificate file schema error: ") + e.what());
  }
}

LoadedCertificate load_certificate(const std::string& path,
                                   const std::vector<std::string>& state_vars) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot open certificate file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return certificate_from_json_text(ss.str(), state_vars);
}

}  // namespace reachcert

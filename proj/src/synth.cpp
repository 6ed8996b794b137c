#include "reachcert/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#include "reachcert/sim.hpp"  // counter_uniform

namespace reachcert {

namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kCostTol = 1e-9;

// Dense n x n inverse via Gauss-Jordan; returns false when singular.
bool invert(std::vector<double>& a, int n) {
  std::vector<double> inv(n * n, 0.0);
  for (int i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[r * n + col]) > std::fabs(a[piv * n + col])) piv = r;
    if (std::fabs(a[piv * n + col]) < 1e-12) return false;
    if (piv != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(a[piv * n + c], a[col * n + c]);
        std::swap(inv[piv * n + c], inv[col * n + c]);
      }
    }
    double d = a[col * n + col];
    for (int c = 0; c < n; ++c) {
      a[col * n + c] /= d;
      inv[col * n + c] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a[r * n + col];
      if (f == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        a[r * n + c] -= f * a[col * n + c];
        inv[r * n + c] -= f * inv[col * n + c];
      }
    }
  }
  a = std::move(inv);
  return true;
}

}  // namespace

LpSolution solve_lp(const LpProblem& lp) {
  const int n = lp.num_vars;
  // primal: max c.z st A z >= b  (rows + bound rows)
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  for (const auto& r : lp.rows) {
    if (static_cast<int>(r.coef.size()) != n) throw SpecError("LP row arity mismatch");
    A.push_back(r.coef);
    b.push_back(r.rhs);
  }
  for (int i = 0; i < n; ++i) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    A.push_back(e);
    b.push_back(lp.lower[i]);
    e[i] = -1.0;
    A.push_back(e);
    b.push_back(-lp.upper[i]);
  }
  const long M = static_cast<long>(A.size());

  // dual in computational form: min g.y st E y = r, y >= 0, where
  // E = A^T (n x M), r = -c, g = -b. Row signs are normalized so r >= 0.
  std::vector<double> r(n);
  std::vector<double> sigma(n, 1.0);
  for (int i = 0; i < n; ++i) {
    r[i] = -lp.objective[i];
    if (r[i] < 0) {
      r[i] = -r[i];
      sigma[i] = -1.0;
    }
  }
  auto col_entry = [&](long j, int i) {  // E[i][j] after sign normalization
    return sigma[i] * A[j][i];
  };
  std::vector<double> cost(M);
  for (long j = 0; j < M; ++j) cost[j] = -b[j];

  // basis: phase 1 starts on artificials (ids M..M+n-1)
  std::vector<long> basis(n);
  for (int i = 0; i < n; ++i) basis[i] = M + i;
  std::vector<double> Binv(n * n, 0.0);
  for (int i = 0; i < n; ++i) Binv[i * n + i] = 1.0;

  auto rebuild_Binv = [&]() -> bool {
    std::vector<double> Bm(n * n, 0.0);
    for (int col = 0; col < n; ++col) {
      long var = basis[col];
      for (int i = 0; i < n; ++i)
        Bm[i * n + col] = var >= M ? (i == var - M ? 1.0 : 0.0) : col_entry(var, i);
    }
    if (!invert(Bm, n)) return false;
    Binv = std::move(Bm);
    return true;
  };

  auto basic_values = [&](std::vector<double>& x) {
    x.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int t = 0; t < n; ++t) x[i] += Binv[i * n + t] * r[t];
  };

  auto column_of = [&](long var, std::vector<double>& col) {
    col.assign(n, 0.0);
    if (var >= M) {
      col[var - M] = 1.0;
    } else {
      for (int i = 0; i < n; ++i) col[i] = col_entry(var, i);
    }
  };

  const long max_iters = 200 * (M + n) + 2000;
  long iters = 0;

  auto run_phase = [&](const std::vector<double>& phase_cost,
                       bool allow_artificial_entering) -> LpStatus {
    std::vector<double> x(n), pi(n), col(n), w(n);
    while (true) {
      if (++iters > max_iters) return LpStatus::Unresolved;
      // multipliers: pi = cost_B' Binv
      std::vector<double> cb(n);
      for (int i = 0; i < n; ++i) {
        long var = basis[i];
        cb[i] = var >= M ? (allow_artificial_entering ? 1.0 : 0.0)
                         : phase_cost[var];
      }
      for (int t = 0; t < n; ++t) {
        pi[t] = 0.0;
        for (int i = 0; i < n; ++i) pi[t] += cb[i] * Binv[i * n + t];
      }
      // Bland: entering = smallest index with negative reduced cost
      long enter = -1;
      for (long j = 0; j < M; ++j) {
        bool in_basis = false;
        for (int i = 0; i < n; ++i)
          if (basis[i] == j) {
            in_basis = true;
            break;
          }
        if (in_basis) continue;
        double cj = phase_cost[j];
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += pi[i] * col_entry(j, i);
        if (cj - dot < -kCostTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::Optimal;
      column_of(enter, col);
      for (int i = 0; i < n; ++i) {
        w[i] = 0.0;
        for (int t = 0; t < n; ++t) w[i] += Binv[i * n + t] * col[t];
      }
      basic_values(x);
      // ratio test, Bland ties by smallest basic variable id
      long leave = -1;
      double best = 0.0;
      for (int i = 0; i < n; ++i) {
        if (w[i] > 1e-11) {
          double ratio = x[i] / w[i];
          if (leave < 0 || ratio < best - 1e-12 ||
              (std::fabs(ratio - best) <= 1e-12 && basis[i] < basis[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      basis[leave] = enter;
      if (!rebuild_Binv()) return LpStatus::Unresolved;
    }
  };

  // phase 1: drive artificials to zero
  std::vector<double> p1cost(M, 0.0);
  LpStatus st = run_phase(p1cost, true);
  if (st == LpStatus::Unresolved) return {LpStatus::Unresolved, {}, 0.0};
  std::vector<double> x(n);
  basic_values(x);
  double art = 0.0;
  for (int i = 0; i < n; ++i)
    if (basis[i] >= M) art += std::fabs(x[i]);
  if (st == LpStatus::Unbounded || art > 1e-7)
    return {LpStatus::Unbounded, {}, 0.0};  // dual infeasible: primal unbounded

  // pivot leftover zero-level artificials out where possible
  for (int i = 0; i < n; ++i) {
    if (basis[i] < M) continue;
    std::vector<double> w(n), col(n);
    bool replaced = false;
    for (long j = 0; j < M && !replaced; ++j) {
      bool in_basis = false;
      for (int t = 0; t < n; ++t)
        if (basis[t] == j) in_basis = true;
      if (in_basis) continue;
      column_of(j, col);
      double wi = 0.0;
      for (int t = 0; t < n; ++t) wi += Binv[i * n + t] * col[t];
      if (std::fabs(wi) > 1e-9) {
        basis[i] = j;
        if (rebuild_Binv()) replaced = true;
      }
    }
  }
  if (!rebuild_Binv()) return {LpStatus::Unresolved, {}, 0.0};

  // phase 2
  st = run_phase(cost, false);
  if (st == LpStatus::Unresolved) return {LpStatus::Unresolved, {}, 0.0};
  if (st == LpStatus::Unbounded) return {LpStatus::Infeasible, {}, 0.0};

  // primal extraction: z = -sigma .* pi with pi the final multipliers
  std::vector<double> cb(n), pi(n);
  for (int i = 0; i < n; ++i) cb[i] = basis[i] >= M ? 0.0 : cost[basis[i]];
  for (int t = 0; t < n; ++t) {
    pi[t] = 0.0;
    for (int i = 0; i < n; ++i) pi[t] += cb[i] * Binv[i * n + t];
  }
  std::vector<double> z(n);
  for (int i = 0; i < n; ++i) z[i] = -sigma[i] * pi[i];

  // verify the candidate
  for (long j = 0; j < M; ++j) {
    double dot = 0.0;
    for (int i = 0; i < n; ++i) dot += A[j][i] * z[i];
    if (dot < b[j] - 1e-8) return {LpStatus::Unresolved, {}, 0.0};
  }
  double obj = 0.0;
  for (int i = 0; i < n; ++i) obj += lp.objective[i] * z[i];
  return {LpStatus::Optimal, std::move(z), obj};
}

std::vector<Exponents> monomial_basis(int arity, int degree) {
  std::vector<Exponents> out;
  Exponents cur(arity, 0);
  // graded-lex enumeration by recursion over remaining degree
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == arity) {
      out.push_back(cur);
      return;
    }
    for (int d = 0; d <= remaining; ++d) {
      cur[pos] = static_cast<uint32_t>(d);
      rec(pos + 1, remaining - d);
    }
    cur[pos] = 0;
  };
  rec(0, degree);
  std::sort(out.begin(), out.end(), GradedLexLess{});
  return out;
}

namespace {

std::vector<std::vector<double>> sample_region(const RegionSpec& region, uint64_t seed,
                                               int per_region, uint64_t salt) {
  std::vector<std::vector<double>> pts;
  if (region.is_empty()) return pts;
  int n = region.arity();
  // tensor grid, 5 per dimension, per piece
  int g = 5;
  for (const auto& piece : region.pieces()) {
    std::vector<int> idx(n, 0);
    while (true) {
      std::vector<double> p(n);
      for (int i = 0; i < n; ++i) {
        double t = (g == 1) ? 0.5 : static_cast<double>(idx[i]) / (g - 1);
        p[i] = piece.dim(i).lo + t * piece.dim(i).width();
      }
      pts.push_back(std::move(p));
      int d = n - 1;
      while (d >= 0) {
        if (++idx[d] < g) break;
        idx[d] = 0;
        --d;
      }
      if (d < 0) break;
    }
  }
  // seeded uniform top-up, pieces round-robin
  uint64_t ctr = 0;
  size_t piece_count = region.pieces().size();
  while (static_cast<int>(pts.size()) < per_region) {
    const Box& piece = region.pieces()[ctr % piece_count];
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) {
      double u = counter_uniform(seed ^ salt, ctr, static_cast<uint64_t>(i));
      p[i] = piece.dim(i).lo + u * piece.dim(i).width();
    }
    pts.push_back(std::move(p));
    ++ctr;
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Concrete stopped-tree leaves (state, weight) after k steps from x.
void stopped_leaves(const ProblemSpec& spec, int k, std::span<const double> x,
                    std::vector<std::pair<std::vector<double>, double>>& leaves) {
  leaves.clear();
  leaves.push_back({std::vector<double>(x.begin(), x.end()), 1.0});
  for (int step = 0; step < k; ++step) {
    std::vector<std::pair<std::vector<double>, double>> next;
    for (auto& [state, wgt] : leaves) {
      if (spec.Xr.contains_point(state)) {
        next.push_back({state, wgt});
        continue;
      }
      for (size_t j = 0; j < spec.dist.size(); ++j)
        next.push_back({spec.model.step(state, spec.dist.support[j]),
                        wgt * spec.dist.probs[j]});
    }
    leaves = std::move(next);
  }
}

}  // namespace

SampleMap initial_samples(Prop p, const ProblemSpec& spec, const CertParams& params,
                          uint64_t seed, int per_region) {
  CertParams dummy = params;
  if (!dummy.eps) dummy.eps = 0.5;
  if (!dummy.eps_prime) dummy.eps_prime = 0.5;
  auto specs = compile_obligation_specs(p, dummy);
  SampleMap samples;
  uint64_t salt = 0xA5C1;
  for (const auto& os : specs) {
    if (samples.count(os.region)) continue;
    RegionSpec region = [&] {
      switch (os.region) {
        case RegionKind::X0: return spec.X0;
        case RegionKind::X: return spec.X;
        case RegionKind::OutsideTarget: return spec.outside_target();
        case RegionKind::Target: return spec.Xr;
        case RegionKind::Boundary: return boundary_faces(spec.X, spec.Xr);
        case RegionKind::OutsideX: return spec.xhat_minus_x();
      }
      return RegionSpec::empty();
    }();
    samples[os.region] = sample_region(region, seed, per_region, salt++);
  }
  return samples;
}

LpBuild build_lp(Prop p, const TemplateSpec& tmpl, const ProblemSpec& spec,
                 const SampleMap& samples, double coeff_bound) {
  int n = spec.model.state_dim;
  CertParams params = tmpl.fixed;
  if (!params.eps) params.eps = 0.5;
  if (!params.eps_prime) params.eps_prime = 0.5;
  auto specs = compile_obligation_specs(p, params);

  for (const auto& os : specs) {
    if (!samples.count(os.region) ||
        (samples.at(os.region).empty() &&
         !(os.region == RegionKind::OutsideX || os.region == RegionKind::Boundary)))
      throw SpecError("no samples for region " + region_kind_name(os.region));
  }

  LpBuild build;
  build.basis_v = monomial_basis(n, tmpl.degree_v);
  bool with_w = uses_w(p) && tmpl.use_w;
  if (with_w) build.basis_w = monomial_basis(n, tmpl.degree_w);
  int nv = static_cast<int>(build.basis_v.size());
  int nw = static_cast<int>(build.basis_w.size());
  if (nv == 0) throw SpecError("empty template basis");
  int vars = nv + nw + 1;
  build.threshold_index = nv + nw;
  build.maximize_threshold =
      bound_kind(p) == BoundKind::Lower && !uses_primed_threshold(p);

  ExpectationOperator T(spec.model, spec.dist);
  int k = params.k.value_or(1);

  auto basis_polys = [&](const std::vector<Exponents>& basis) {
    std::vector<Polynomial> out;
    for (const auto& e : basis) {
      Polynomial m(n);
      m.add_term(e, 1.0);
      out.push_back(std::move(m));
    }
    return out;
  };
  std::vector<Polynomial> phi_v = basis_polys(build.basis_v);
  std::vector<Polynomial> phi_w = basis_polys(build.basis_w);

  // operator images of the basis, computed on demand
  std::map<std::pair<int, int>, std::vector<Polynomial>> images;  // (op, fn)
  auto image = [&](OpK op, FnK fn) -> const std::vector<Polynomial>& {
    auto key = std::make_pair(static_cast<int>(op), static_cast<int>(fn));
    auto it = images.find(key);
    if (it != images.end()) return it->second;
    const auto& base = (fn == FnK::V) ? phi_v : phi_w;
    std::vector<Polynomial> out;
    for (const auto& b : base) {
      if (op == OpK::Id)
        out.push_back(b);
      else if (op == OpK::T)
        out.push_back(T.post_expectation(b));
      else
        out.push_back(T.k_post_expectation(b, k));
    }
    return images.emplace(key, std::move(out)).first->second;
  };

  LpProblem lp;
  lp.num_vars = vars;
  lp.objective.assign(vars, 0.0);
  lp.objective[build.threshold_index] = build.maximize_threshold ? 1.0 : -1.0;
  lp.lower.assign(vars, -coeff_bound);
  lp.upper.assign(vars, coeff_bound);
  lp.lower[build.threshold_index] = 0.0;
  lp.upper[build.threshold_index] = 1.0;

  std::vector<std::pair<std::vector<double>, double>> leaves;
  for (const auto& os : specs) {
    const auto& pts = samples.at(os.region);
    for (const auto& x : pts) {
      LpRow row;
      row.coef.assign(vars, 0.0);
      row.rhs = -os.const_term;
      if (os.stopped) {
        stopped_leaves(spec, k, x, leaves);
        for (int i = 0; i < nv; ++i) {
          double c = phi_v[i].evaluate(x);
          for (const auto& [leaf, wgt] : leaves) c -= wgt * phi_v[i].evaluate(leaf);
          row.coef[i] = c;
        }
      } else {
        for (const auto& t : os.terms) {
          if (t.fn == FnK::V) {
            const auto& img = image(t.op, FnK::V);
            for (int i = 0; i < nv; ++i) row.coef[i] += t.coef * img[i].evaluate(x);
          } else if (with_w) {
            const auto& img = image(t.op, FnK::W);
            for (int i = 0; i < nw; ++i)
              row.coef[nv + i] += t.coef * img[i].evaluate(x);
          }
          // with w pinned to zero its terms vanish
        }
      }
      row.coef[build.threshold_index] = os.eps_coef;
      lp.rows.push_back(std::move(row));
    }
  }
  build.row_count = static_cast<long>(lp.rows.size());
  build.lp = std::move(lp);
  return build;
}

namespace {

Polynomial from_coeffs(const std::vector<Exponents>& basis,
                       std::span<const double> coeffs, int arity) {
  Polynomial p(arity);
  for (size_t i = 0; i < basis.size(); ++i) p.add_term(basis[i], coeffs[i]);
  return p;
}

// Rigorous threshold from the init obligation shape: picks the tightest
// threshold value the proved inequality supports, with a small slack.
std::optional<double> tighten_threshold(Prop p, const Polynomial& v,
                                        const ProblemSpec& spec, const CertParams& params,
                                        int depth) {
  CertParams dummy = params;
  if (!dummy.eps) dummy.eps = 0.5;
  if (!dummy.eps_prime) dummy.eps_prime = 0.5;
  auto specs = compile_obligation_specs(p, dummy);
  for (const auto& os : specs) {
    if (os.label != "init") continue;
    if (os.terms.size() != 1 || os.terms[0].fn != FnK::V || os.terms[0].op != OpK::Id)
      return std::nullopt;
    double sv = os.terms[0].coef, e = os.eps_coef, c0 = os.const_term;
    if (e == 0.0) return std::nullopt;
    // obligation: sv * v + e * t + c0 >= 0 on X0
    double worst;  // max over X0 of -sv*v
    if (sv > 0)
      worst = bound_supremum(-v, spec.X0, depth) * sv;
    else
      worst = bound_supremum(v, spec.X0, depth) * (-sv);
    double slack = 1e-9;
    double t;
    if (e > 0)
      t = (worst - c0) / e + slack;
    else
      t = (worst - c0) / e - slack;  // e < 0: t must be below the ratio
    return std::clamp(t, 0.0, 1.0);
  }
  return std::nullopt;
}

}  // namespace

SynthResult synthesize_cegis(Prop p, const TemplateSpec& tmpl, const ProblemSpec& spec,
                             const SynthBudget& budget, const CheckSettings& settings) {
  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  SynthResult result;
  SampleMap samples =
      initial_samples(p, spec, tmpl.fixed, budget.seed, budget.samples_per_region);

  int n = spec.model.state_dim;
  for (int iter = 1; iter <= budget.max_iterations; ++iter) {
    result.iterations = iter;
    long count = 0;
    for (const auto& [r, pts] : samples) count += static_cast<long>(pts.size());
    result.samples_used = count;

    LpBuild build = build_lp(p, tmpl, spec, samples, budget.coeff_bound);
    LpSolution sol = solve_lp(build.lp);
    if (sol.status == LpStatus::Infeasible) {
      result.status = SynthResult::St::Infeasible;
      result.detail = "sampled LP infeasible at iteration " + std::to_string(iter);
      return result;
    }
    if (sol.status != LpStatus::Optimal) {
      result.status = SynthResult::St::Unresolved;
      result.detail = "LP solve did not reach optimality";
      return result;
    }

    int nv = static_cast<int>(build.basis_v.size());
    int nw = static_cast<int>(build.basis_w.size());
    Certificate cert(from_coeffs(build.basis_v,
                                 std::span<const double>(sol.values.data(), nv), n));
    if (uses_w(p)) {
      if (nw > 0)
        cert.w = from_coeffs(build.basis_w,
                             std::span<const double>(sol.values.data() + nv, nw), n);
      else
        cert.w = Polynomial::zero(n);
    }
    cert.params = tmpl.fixed;
    double t = sol.values[build.threshold_index];
    auto tightened = tighten_threshold(p, cert.v, spec, tmpl.fixed, settings.depth_limit);
    if (tightened) t = *tightened;
    if (uses_primed_threshold(p))
      cert.params.eps_prime = t;
    else
      cert.params.eps = t;

    CertReport report = check_certificate(p, cert, spec, settings);
    if (report.all_proved()) {
      result.status = SynthResult::St::Certified;
      result.certificate = std::move(cert);
      result.report = std::move(report);
      result.detail = "certified at iteration " + std::to_string(iter);
      return result;
    }

    // harvest counterexamples and undecided frontiers
    long added = 0;
    auto add_point = [&](RegionKind rk, std::vector<double> pt) {
      auto& vec = samples[rk];
      if (std::find(vec.begin(), vec.end(), pt) == vec.end()) {
        vec.push_back(std::move(pt));
        ++added;
      }
    };
    auto compiled = compile_obligations(p, cert, spec);
    for (size_t i = 0; i < report.obligations.size(); ++i) {
      const auto& ob = report.obligations[i];
      RegionKind rk = compiled[i].region_kind;
      if (ob.outcome.status == Status::Disproved && ob.outcome.witness)
        add_point(rk, ob.outcome.witness->point);
      for (size_t f = 0; f < ob.outcome.frontier.size() && f < 8; ++f)
        add_point(rk, ob.outcome.frontier[f].center());
    }
    if (added == 0) {
      result.status = SynthResult::St::Unresolved;
      result.detail = "no new counterexample points; stalled";
      return result;
    }
    if (elapsed() > budget.max_seconds) {
      result.status = SynthResult::St::Unresolved;
      result.detail = "time budget exhausted";
      return result;
    }
  }
  result.status = SynthResult::St::Unresolved;
  result.detail = "iteration budget exhausted";
  return result;
}

}  // namespace reachcert

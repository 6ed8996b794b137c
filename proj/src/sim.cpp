#include "reachcert/sim.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace reachcert {

namespace {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Flattened polynomial for fast repeated evaluation in the inner loop.
struct FlatPoly {
  struct Term {
    double coef;
    std::vector<std::pair<int, uint32_t>> vars;  // (index, exponent)
  };
  std::vector<Term> terms;

  explicit FlatPoly(const Polynomial& p) {
    for (const auto& [e, c] : p.terms()) {
      Term t;
      t.coef = c;
      for (size_t i = 0; i < e.size(); ++i)
        if (e[i] > 0) t.vars.push_back({static_cast<int>(i), e[i]});
      terms.push_back(std::move(t));
    }
  }

  double eval(std::span<const double> x) const {
    double sum = 0.0;
    for (const auto& t : terms) {
      double v = t.coef;
      for (auto [i, e] : t.vars) {
        double b = x[i];
        for (uint32_t k = 1; k < e; ++k) v *= b;
        v *= b;
      }
      sum += v;
    }
    return sum;
  }
};

// Regularized incomplete beta function, continued-fraction form.
double betacf(double a, double b, double x) {
  const int kMaxIter = 300;
  const double kEps = 3e-15, kFpMin = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

double inc_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
              a * std::log(x) + b * std::log1p(-x);
  double bt = std::exp(ln);
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

// Inverse of inc_beta in x by bisection; monotone, so this is robust.
double inv_inc_beta(double a, double b, double p) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (inc_beta(a, b, mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double counter_uniform(uint64_t seed, uint64_t trial, uint64_t step) {
  uint64_t h = splitmix64(seed ^ 0xD1B54A32D192ED03ULL);
  h = splitmix64(h ^ (trial * 0x9E3779B97F4A7C15ULL));
  h = splitmix64(h ^ (step * 0xC2B2AE3D27D4EB4FULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::pair<double, double> clopper_pearson(long successes, long trials, double confidence) {
  if (trials <= 0) throw SpecError("clopper_pearson requires trials >= 1");
  double alpha = 1.0 - confidence;
  double x = static_cast<double>(successes), n = static_cast<double>(trials);
  double lo = (successes == 0) ? 0.0 : inv_inc_beta(x, n - x + 1.0, alpha / 2.0);
  double hi =
      (successes == trials) ? 1.0 : inv_inc_beta(x + 1.0, n - x, 1.0 - alpha / 2.0);
  return {lo, hi};
}

namespace {

int pick_support(const Disturbance& dist, double u) {
  double acc = 0.0;
  for (size_t j = 0; j + 1 < dist.size(); ++j) {
    acc += dist.probs[j];
    if (u < acc) return static_cast<int>(j);
  }
  return static_cast<int>(dist.size() - 1);
}

TrialOutcome run_trial(const ProblemSpec& spec,
                       const std::vector<FlatPoly>& dynamics,
                       std::span<const double> x0, const TrialConfig& config,
                       uint64_t trial) {
  int n = spec.model.state_dim;
  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> xt(n + spec.model.dist_dim);
  if (spec.Xr.contains_point(x)) return {TrialOutcome::Kind::Hit, 0};
  for (int step = 1; step <= config.horizon; ++step) {
    double u = counter_uniform(config.seed, trial, static_cast<uint64_t>(step));
    int j = pick_support(spec.dist, u);
    std::copy(x.begin(), x.end(), xt.begin());
    std::copy(spec.dist.support[j].begin(), spec.dist.support[j].end(),
              xt.begin() + n);
    for (int i = 0; i < n; ++i) x[i] = dynamics[i].eval(xt);
    if (spec.Xr.contains_point(x)) return {TrialOutcome::Kind::Hit, step};
    if (config.semantics == ReachSemantics::ReachAvoid && !spec.X.contains_point(x))
      return {TrialOutcome::Kind::Exit, step};
  }
  return {TrialOutcome::Kind::Censored, config.horizon};
}

}  // namespace

TrialOutcome simulate_reach(const ProblemSpec& spec, std::span<const double> x0,
                            const TrialConfig& config, uint64_t trial_index) {
  if (!spec.X.contains_point(x0))
    throw SpecError("simulation start point lies outside X");
  std::vector<FlatPoly> dynamics;
  for (const auto& f : spec.model.dynamics) dynamics.push_back(FlatPoly(f));
  return run_trial(spec, dynamics, x0, config, trial_index);
}

ProbabilityEstimate estimate_probability(const ProblemSpec& spec,
                                         std::span<const double> x0,
                                         const TrialConfig& config) {
  if (!spec.X.contains_point(x0))
    throw SpecError("simulation start point lies outside X");
  if (config.trials < 1) throw SpecError("trials must be at least 1");

  std::vector<FlatPoly> dynamics;
  for (const auto& f : spec.model.dynamics) dynamics.push_back(FlatPoly(f));

  long hits = 0, exits = 0, censored = 0;
  int threads = std::max(1, config.threads);
  if (threads == 1) {
    for (long t = 0; t < config.trials; ++t) {
      TrialOutcome o = run_trial(spec, dynamics, x0, config, static_cast<uint64_t>(t));
      if (o.kind == TrialOutcome::Kind::Hit)
        ++hits;
      else if (o.kind == TrialOutcome::Kind::Exit)
        ++exits;
      else
        ++censored;
    }
  } else {
    // trials are independent streams; integer counts aggregate in any order
    std::vector<long> h(threads, 0), e(threads, 0), c(threads, 0);
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w]() {
        for (long t = w; t < config.trials; t += threads) {
          TrialOutcome o =
              run_trial(spec, dynamics, x0, config, static_cast<uint64_t>(t));
          if (o.kind == TrialOutcome::Kind::Hit)
            ++h[w];
          else if (o.kind == TrialOutcome::Kind::Exit)
            ++e[w];
          else
            ++c[w];
        }
      });
    }
    for (auto& th : pool) th.join();
    for (int w = 0; w < threads; ++w) {
      hits += h[w];
      exits += e[w];
      censored += c[w];
    }
  }

  ProbabilityEstimate est;
  est.hits = hits;
  est.exits = exits;
  est.censored = censored;
  est.trials = config.trials;
  est.horizon = config.horizon;
  est.confidence = config.confidence;
  est.semantics = to_string(config.semantics);
  est.p_hat = static_cast<double>(hits) / static_cast<double>(config.trials);
  auto [lo, hi] = clopper_pearson(hits, config.trials, config.confidence);
  est.ci_low = lo;
  est.ci_high = hi;
  return est;
}

double ChainResult::at(std::span<const double> x) const {
  const std::vector<double> key(x.begin(), x.end());
  auto it = probability.find(key);
  if (it != probability.end()) return it->second;
  // nearest lattice snap
  double best = std::numeric_limits<double>::infinity();
  double val = 0.0;
  for (const auto& [pt, p] : probability) {
    double d = 0.0;
    for (size_t i = 0; i < pt.size(); ++i) d += std::fabs(pt[i] - x[i]);
    if (d < best) {
      best = d;
      val = p;
    }
  }
  if (!std::isfinite(best)) throw SpecError("empty chain result");
  return val;
}

ChainResult exact_chain_probability(const ProblemSpec& spec, const LatticeSpec& lattice) {
  int n = spec.model.state_dim;
  if (!(lattice.step > 0)) throw SpecError("lattice step must be positive");
  std::vector<double> origin = lattice.origin;
  if (origin.empty()) origin.assign(n, 0.0);
  if (static_cast<int>(origin.size()) != n)
    throw SpecError("lattice origin dimension mismatch");

  // lattice points covering Xhat (if present) or X
  const RegionSpec& cover = (spec.Xhat ? *spec.Xhat : spec.X);
  Box bb = cover.bounding_box();
  std::vector<long> lo_idx(n), hi_idx(n);
  long total = 1;
  for (int i = 0; i < n; ++i) {
    lo_idx[i] = static_cast<long>(std::ceil((bb.dim(i).lo - origin[i]) / lattice.step - 1e-9));
    hi_idx[i] = static_cast<long>(std::floor((bb.dim(i).hi - origin[i]) / lattice.step + 1e-9));
    if (hi_idx[i] < lo_idx[i]) throw SpecError("lattice does not intersect the cover set");
    total *= (hi_idx[i] - lo_idx[i] + 1);
    if (total > 2000000) throw SpecError("lattice has too many states");
  }

  auto point_of = [&](const std::vector<long>& idx) {
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) p[i] = origin[i] + lattice.step * static_cast<double>(idx[i]);
    return p;
  };

  // enumerate lattice indices in row-major order
  std::vector<std::vector<long>> indices;
  std::vector<long> cur(lo_idx);
  while (true) {
    indices.push_back(cur);
    int d = n - 1;
    while (d >= 0) {
      if (++cur[d] <= hi_idx[d]) break;
      cur[d] = lo_idx[d];
      --d;
    }
    if (d < 0) break;
  }

  // classify states
  enum class Cls { Target, Transient, Dead };
  std::map<std::vector<long>, long> transient_id;
  std::vector<std::vector<long>> transient;
  auto classify = [&](const std::vector<long>& idx) {
    std::vector<double> p = point_of(idx);
    if (spec.Xr.contains_point(p)) return Cls::Target;
    if (spec.X.contains_point(p)) return Cls::Transient;
    return Cls::Dead;
  };
  for (const auto& idx : indices) {
    if (classify(idx) == Cls::Transient) {
      transient_id[idx] = static_cast<long>(transient.size());
      transient.push_back(idx);
    }
  }

  // transitions; verify lattice closure by evaluation
  long m = static_cast<long>(transient.size());
  struct Arc {
    long to;
    double prob;
  };
  std::vector<std::vector<Arc>> arcs(m);
  std::vector<double> rhs(m, 0.0);
  for (long s = 0; s < m; ++s) {
    std::vector<double> x = point_of(transient[s]);
    for (size_t j = 0; j < spec.dist.size(); ++j) {
      std::vector<double> y = spec.model.step(x, spec.dist.support[j]);
      std::vector<long> idx(n);
      for (int i = 0; i < n; ++i) {
        double raw = (y[i] - origin[i]) / lattice.step;
        double snapped = std::round(raw);
        if (std::fabs(raw - snapped) > 1e-9)
          throw SpecError("dynamics are not lattice-closed");
        idx[i] = static_cast<long>(snapped);
      }
      std::vector<double> snapped_pt = point_of(idx);
      if (spec.Xr.contains_point(snapped_pt)) {
        rhs[s] += spec.dist.probs[j];
      } else if (spec.X.contains_point(snapped_pt)) {
        auto it = transient_id.find(idx);
        if (it == transient_id.end())
          throw SpecError("lattice does not cover a reachable state inside X");
        arcs[s].push_back({it->second, spec.dist.probs[j]});
      }
      // images outside X absorb with probability 0
    }
  }

  ChainResult result;
  result.transient_states = m;

  std::vector<double> p(m, 0.0);
  bool solved = false;
  if (m <= 4000) {
    // dense solve of (I - P) p = rhs
    long dim = m;
    std::vector<double> A(dim * dim, 0.0), b(rhs.begin(), rhs.end());
    for (long i = 0; i < dim; ++i) {
      A[i * dim + i] = 1.0;
      for (const auto& a : arcs[i]) A[i * dim + a.to] -= a.prob;
    }
    // partial-pivot Gaussian elimination
    std::vector<long> perm(dim);
    solved = true;
    for (long col = 0; col < dim && solved; ++col) {
      long piv = col;
      for (long r = col + 1; r < dim; ++r)
        if (std::fabs(A[r * dim + col]) > std::fabs(A[piv * dim + col])) piv = r;
      if (std::fabs(A[piv * dim + col]) < 1e-13) {
        solved = false;
        break;
      }
      if (piv != col) {
        for (long c2 = 0; c2 < dim; ++c2) std::swap(A[piv * dim + c2], A[col * dim + c2]);
        std::swap(b[piv], b[col]);
      }
      for (long r = col + 1; r < dim; ++r) {
        double f = A[r * dim + col] / A[col * dim + col];
        if (f == 0.0) continue;
        for (long c2 = col; c2 < dim; ++c2) A[r * dim + c2] -= f * A[col * dim + c2];
        b[r] -= f * b[col];
      }
    }
    if (solved) {
      for (long r = dim - 1; r >= 0; --r) {
        double acc = b[r];
        for (long c2 = r + 1; c2 < dim; ++c2) acc -= A[r * dim + c2] * p[c2];
        p[r] = acc / A[r * dim + r];
      }
    }
  }
  if (!solved) {
    // value iteration to 1e-12
    result.used_value_iteration = true;
    std::vector<double> q(m, 0.0);
    for (long iter = 0; iter < 10000000; ++iter) {
      double diff = 0.0;
      for (long s = 0; s < m; ++s) {
        double acc = rhs[s];
        for (const auto& a : arcs[s]) acc += a.prob * p[a.to];
        q[s] = acc;
        diff = std::max(diff, std::fabs(q[s] - p[s]));
      }
      std::swap(p, q);
      if (diff < 1e-12) break;
    }
  }

  for (const auto& idx : indices) {
    std::vector<double> pt = point_of(idx);
    Cls c = classify(idx);
    double val = 0.0;
    if (c == Cls::Target)
      val = 1.0;
    else if (c == Cls::Transient)
      val = p[transient_id[idx]];
    result.probability[pt] = val;
  }
  return result;
}

}  // namespace reachcert

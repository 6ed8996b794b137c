#ifndef REACHCERT_SIM_HPP
#define REACHCERT_SIM_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "reachcert/problem.hpp"

namespace reachcert {

enum class ReachSemantics { ReachInvariant, ReachAvoid };

inline const char* to_string(ReachSemantics s) {
  return s == ReachSemantics::ReachInvariant ? "reach-invariant" : "reach-avoid";
}

struct TrialConfig {
  uint64_t seed = 42;
  int horizon = 500;
  long trials = 100000;
  ReachSemantics semantics = ReachSemantics::ReachAvoid;
  double confidence = 0.99;
  int threads = 1;
};

struct TrialOutcome {
  enum class Kind { Hit, Exit, Censored } kind;
  int step = 0;
};

struct ProbabilityEstimate {
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  long hits = 0;
  long exits = 0;
  long censored = 0;
  long trials = 0;
  int horizon = 0;
  double confidence = 0.99;
  std::string semantics;
};

// Deterministic counter-based uniform stream: the draw for (seed, trial,
// step) is a pure function of the key, so scheduling cannot change it.
double counter_uniform(uint64_t seed, uint64_t trial, uint64_t step);

// Runs one trajectory of the stopped dynamics from x0 (must lie in X):
// Hit at the first step in Xr, Exit at the first step outside X
// (reach-avoid only), Censored at the horizon.
TrialOutcome simulate_reach(const ProblemSpec& spec, std::span<const double> x0,
                            const TrialConfig& config, uint64_t trial_index = 0);

// Monte-Carlo estimate of the within-horizon reach probability with an
// exact Clopper-Pearson interval. One-sided evidence for the eventual
// reach probability; the horizon is always reported.
ProbabilityEstimate estimate_probability(const ProblemSpec& spec,
                                         std::span<const double> x0,
                                         const TrialConfig& config);

// Exact absorption probabilities for lattice-closed dynamics: solves
// p(x) = sum_j p_j p(f(x, theta_j)) on transient states with p = 1 on
// Xr-states and p = 0 on exit states. Direct dense solve with a
// value-iteration fallback.
struct LatticeSpec {
  double step = 1.0;
  std::vector<double> origin;  // defaults to zeros
};

struct ChainResult {
  std::map<std::vector<double>, double> probability;  // lattice point -> p
  long transient_states = 0;
  bool used_value_iteration = false;

  double at(std::span<const double> x) const;  // nearest lattice snap
};

ChainResult exact_chain_probability(const ProblemSpec& spec, const LatticeSpec& lattice);

// Exact two-sided Clopper-Pearson bounds (exposed for tests).
std::pair<double, double> clopper_pearson(long successes, long trials,
                                          double confidence);

}  // namespace reachcert

#endif

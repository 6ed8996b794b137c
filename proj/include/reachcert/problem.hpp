#ifndef REACHCERT_PROBLEM_HPP
#define REACHCERT_PROBLEM_HPP

#include <optional>
#include <string>
#include <vector>

#include "reachcert/outcome.hpp"
#include "reachcert/poly.hpp"
#include "reachcert/region.hpp"

namespace reachcert {

class SpecError : public std::runtime_error {
 public:
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

// Finite-support i.i.d. disturbance: support points with positive
// probabilities summing to one.
struct Disturbance {
  std::vector<std::vector<double>> support;
  std::vector<double> probs;

  size_t size() const { return support.size(); }
  void validate(int dist_dim) const;
};

// x(l+1) = f(x(l), theta(l)); each component is a polynomial over the
// state variables followed by the disturbance variables.
struct SystemModel {
  int state_dim = 0;
  int dist_dim = 0;
  std::vector<Polynomial> dynamics;  // state_dim components, arity n+m

  void validate() const;
  // Component polynomials over x only, with theta fixed to support[j].
  std::vector<Polynomial> dynamics_at(const std::vector<double>& theta) const;
  std::vector<double> step(std::span<const double> x,
                           const std::vector<double>& theta) const;
};

enum class ReachMode { AssumedInvariant, Xhat };

struct ProblemSpec {
  SystemModel model;
  Disturbance dist;
  RegionSpec X, X0, Xr;
  std::optional<RegionSpec> Xhat;
  ReachMode mode = ReachMode::AssumedInvariant;

  std::vector<std::string> state_vars;
  std::vector<std::string> dist_vars;
  bool xhat_defaulted = false;  // Xhat was synthesized at load time

  void validate() const;
  // closure cover of X \ Xr
  RegionSpec outside_target() const { return region_difference(X, Xr); }
  // Xhat \ X in xhat mode, empty otherwise
  RegionSpec xhat_minus_x() const;
};

// Loads and fully validates a problem file (JSON). Throws SpecError with
// the failed invariant named, or ParseError for malformed polynomials.
ProblemSpec load_problem(const std::string& path);
ProblemSpec problem_from_json_text(const std::string& text);

// Proves, disproves, or gives up on f(X, Theta) being contained in X by
// branch and bound over cover boxes and support points.
CheckOutcome check_assumption1(const ProblemSpec& spec, int depth_limit = 12);

// Verifies the stopped-process requirement on Xhat: X inside Xhat and the
// one-step images of X \ Xr inside Xhat.
CheckOutcome check_xhat_invariance(const ProblemSpec& spec, int depth_limit = 12);

}  // namespace reachcert

#endif

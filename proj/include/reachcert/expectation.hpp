#ifndef REACHCERT_EXPECTATION_HPP
#define REACHCERT_EXPECTATION_HPP

#include "reachcert/problem.hpp"
#include "reachcert/regioncheck.hpp"

namespace reachcert {

inline constexpr int kExpectationDegreeCap = 64;

// Exact post-expectation operator for a finite-support disturbance:
// (T v)(x) = sum_j p_j * v(f(x, theta_j)) as a polynomial identity.
class ExpectationOperator {
 public:
  ExpectationOperator(const SystemModel& model, const Disturbance& dist);

  // One application of T. Degree grows by the factor deg_x(f).
  Polynomial post_expectation(const Polynomial& v) const;

  // T applied k times; equals the |support|^k enumeration over Theta^k.
  Polynomial k_post_expectation(const Polynomial& v, int k) const;

 private:
  const SystemModel& model_;
  const Disturbance& dist_;
  std::vector<std::vector<Polynomial>> dyn_at_;  // per support point
};

// Proves v(x) >= E[v(stopped_k(x))] on `region`, where the stopped
// process freezes on entering Xr and otherwise advances with the raw
// dynamics. Branch and bound: per box the disturbance tree is advanced
// symbolically; boxes whose intermediate states straddle the Xr boundary
// are resolved by checking every consistent freeze/advance labeling, or
// split. Disproofs come from concretely simulating the stopped recursion.
CheckOutcome stopped_expectation_check(const Polynomial& v, const ProblemSpec& spec,
                                       int k, const RegionSpec& region,
                                       const CheckSettings& s);

}  // namespace reachcert

#endif

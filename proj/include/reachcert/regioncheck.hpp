#ifndef REACHCERT_REGIONCHECK_HPP
#define REACHCERT_REGIONCHECK_HPP

#include <string>

#include "reachcert/outcome.hpp"
#include "reachcert/poly.hpp"
#include "reachcert/region.hpp"

namespace reachcert {

enum class Sense { GeqZero, LeqZero };

// A universally quantified sign condition: forall x in region,
// poly(x) >= 0 (resp. <= 0) with the given proof margin. The margin is an
// extra slack the prover must certify (used for strict inequalities);
// violations are judged against the sense itself.
struct SignObligation {
  Polynomial poly;
  RegionSpec region;
  Sense sense = Sense::GeqZero;
  double margin = 0.0;
  std::string label;
};

// Global conservative tolerance: every proved claim is certified down to
// -eta, every disproof must exceed eta. Overridable per run.
inline constexpr double kDefaultEta = 1e-9;
inline constexpr double kDefaultStrictMargin = 1e-6;
inline constexpr int kDefaultDepth = 14;

struct CheckSettings {
  double eta = kDefaultEta;
  int depth_limit = kDefaultDepth;
  size_t max_frontier = 64;  // frontier boxes retained on Unknown
};

// Branch-and-bound sign decision. Proved only if every leaf enclosure
// clears margin - eta; Disproved only with an evaluated witness below
// -eta; Unknown otherwise, with the undecided frontier. Deterministic:
// pieces in order, depth-first, lower half first, widest dimension split
// with ties to the lowest index.
CheckOutcome prove_sign(const SignObligation& ob, const CheckSettings& s);
inline CheckOutcome prove_sign(const SignObligation& ob, int depth_limit) {
  CheckSettings s;
  s.depth_limit = depth_limit;
  return prove_sign(ob, s);
}

// Certified upper bound on sup over the region: max of leaf enclosure
// upper bounds under best-first refinement. Tightens monotonically with
// depth_limit. Errors on an empty region.
double bound_supremum(const Polynomial& p, const RegionSpec& region, int depth_limit);

}  // namespace reachcert

#endif

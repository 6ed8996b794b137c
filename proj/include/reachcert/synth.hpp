#ifndef REACHCERT_SYNTH_HPP
#define REACHCERT_SYNTH_HPP

#include <cstdint>
#include <map>
#include <optional>

#include "reachcert/certify.hpp"

namespace reachcert {

// Linear program: maximize objective . z subject to row. z >= rhs for
// every row and lower <= z <= upper componentwise.
struct LpRow {
  std::vector<double> coef;
  double rhs = 0.0;
};

struct LpProblem {
  int num_vars = 0;
  std::vector<LpRow> rows;
  std::vector<double> objective;
  std::vector<double> lower, upper;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, Unresolved };

struct LpSolution {
  LpStatus status = LpStatus::Unresolved;
  std::vector<double> values;
  double objective = 0.0;
};

// Revised simplex with Bland's anti-cycling rule, run on the standard-form
// dual (the variable count here is tiny while the row count is large).
// Deterministic for fixed input; Optimal solutions satisfy every row with
// residual <= 1e-8.
LpSolution solve_lp(const LpProblem& lp);

struct TemplateSpec {
  int degree_v = 4;
  int degree_w = 2;
  bool use_w = true;      // ignored for propositions without w; when false, w = 0
  CertParams fixed;       // every non-threshold parameter, fixed per run
};

struct SynthBudget {
  int max_iterations = 30;
  double max_seconds = 60.0;
  uint64_t seed = 42;
  int samples_per_region = 200;
  double coeff_bound = 1e4;  // box bound on template coefficients
};

// Sample sets per obligation region.
using SampleMap = std::map<RegionKind, std::vector<std::vector<double>>>;

struct LpBuild {
  LpProblem lp;
  std::vector<Exponents> basis_v, basis_w;
  int threshold_index = -1;
  bool maximize_threshold = true;
  long row_count = 0;
};

// Monomial basis of all exponent vectors with total degree <= degree.
std::vector<Exponents> monomial_basis(int arity, int degree);

// Sampled relaxation of the proposition's obligations: one row per sample
// per obligation, affine in the template coefficients and the threshold.
LpBuild build_lp(Prop p, const TemplateSpec& tmpl, const ProblemSpec& spec,
                 const SampleMap& samples, double coeff_bound);

struct SynthResult {
  enum class St { Certified, Infeasible, Unresolved } status = St::Unresolved;
  std::optional<Certificate> certificate;
  std::optional<CertReport> report;
  int iterations = 0;
  long samples_used = 0;
  std::string detail;
};

// Counterexample-guided loop: solve the sampled LP, check rigorously,
// feed violations back. Certified results always carry the rigorous
// report; the LP alone never certifies.
SynthResult synthesize_cegis(Prop p, const TemplateSpec& tmpl, const ProblemSpec& spec,
                             const SynthBudget& budget, const CheckSettings& settings);

// Initial samples: tensor grid (5 per dimension) plus seeded uniform
// points per region, topped up to `per_region`.
SampleMap initial_samples(Prop p, const ProblemSpec& spec, const CertParams& params,
                          uint64_t seed, int per_region);

}  // namespace reachcert

#endif

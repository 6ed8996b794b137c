#ifndef REACHCERT_CERTIFY_HPP
#define REACHCERT_CERTIFY_HPP

#include <optional>
#include <string>
#include <vector>

#include "reachcert/expectation.hpp"
#include "reachcert/problem.hpp"
#include "reachcert/regioncheck.hpp"

namespace reachcert {

// The fifteen certificate conditions plus the two variants.
enum class Prop {
  P1, P2, P3, P4, P5, P6, P7, P8, P9, P10, P11, P12, P13, P14, P15,
  P6Xhat,   // P6 with the explicit outer-set constraint
  P14Alpha  // P14 with the geometric one-step condition
};

std::string prop_name(Prop p);
Prop parse_prop(const std::string& name);
std::vector<Prop> all_props();

enum class BoundKind { Lower, Upper, AlmostSure };

struct BoundInfo {
  BoundKind kind = BoundKind::Upper;
  double value = 0.0;
  std::optional<int> horizon;  // nullopt means the infinite horizon
};

struct CertParams {
  std::optional<int> k;
  std::optional<double> c;
  std::optional<double> delta;
  std::optional<double> lambda;
  std::optional<double> alpha_tilde;
  std::optional<double> beta_tilde;
  std::optional<double> alpha;
  std::optional<int> N;
  std::optional<double> eps;        // the plain threshold (eps1 or eps2)
  std::optional<double> eps_prime;  // the primed threshold
  std::optional<double> M;
};

struct Certificate {
  Polynomial v;
  std::optional<Polynomial> w;
  CertParams params;

  explicit Certificate(Polynomial v_) : v(std::move(v_)) {}
};

// Regions an obligation can be quantified over.
enum class RegionKind { X0, X, OutsideTarget, Target, Boundary, OutsideX };
std::string region_kind_name(RegionKind k);

enum class OpK { Id, T, Tk };
enum class FnK { V, W };

struct LinTerm {
  double coef;
  OpK op;
  FnK fn;
};

// One line of a proposition's constraint system, in the normalized form
//   sum_i coef_i * op_i(fn_i)  +  eps_coef * threshold  +  const_term >= 0
// over `region`. `stopped` marks the stopped-process constraint, which is
// handled by its own decision procedure.
struct ObSpec {
  std::string label;
  RegionKind region;
  std::vector<LinTerm> terms;
  double eps_coef = 0.0;
  double const_term = 0.0;
  double margin = 0.0;
  bool stopped = false;
};

// Proposition metadata.
bool requires_assumption1(Prop p);
bool uses_w(Prop p);
BoundKind bound_kind(Prop p);
// The threshold the proposition's bound is driven by (eps or eps_prime).
bool uses_primed_threshold(Prop p);

// The transcription of the proposition's constraint system, with all
// parameters folded into coefficients. Throws SpecError on missing or
// out-of-range parameters.
std::vector<ObSpec> compile_obligation_specs(Prop p, const CertParams& params,
                                             double strict_margin = kDefaultStrictMargin);

// Instantiates the specs against a concrete certificate and problem.
// The threshold value is substituted; `stopped` specs keep a marker.
struct CompiledObligation {
  SignObligation sign;  // for stopped specs, sign.poly is unused
  RegionKind region_kind = RegionKind::X;
  bool stopped = false;
  int k = 1;  // stopped horizon
};
std::vector<CompiledObligation> compile_obligations(Prop p, const Certificate& cert,
                                                    const ProblemSpec& spec);

// Closed-form certified bound; validates parameter ranges.
BoundInfo certified_bound(Prop p, const CertParams& params);

struct ObligationResult {
  std::string label;
  RegionKind region;
  double margin = 0.0;
  CheckOutcome outcome;
};

struct CertReport {
  Prop prop = Prop::P1;
  std::vector<ObligationResult> obligations;
  std::optional<BoundInfo> bound;  // present iff every obligation proved
  std::vector<std::string> assumptions_used;
  std::vector<std::string> notes;
  std::string semantics;  // "reach-invariant" or "reach-avoid"
  double eta = kDefaultEta;
  int depth = kDefaultDepth;

  bool all_proved() const;
  bool any_disproved() const;
};

// Compiles and checks a candidate certificate: mode gates, invariance
// checks, one rigorous sign check per obligation, bound attachment.
CertReport check_certificate(Prop p, const Certificate& cert, const ProblemSpec& spec,
                             const CheckSettings& settings);

// v |-> 1 - v. Involutive.
Polynomial dualize(const Polynomial& v);

// Lifts a proved P1 certificate to P7 with w = 0. Throws if the P1 check
// does not fully prove.
Certificate embed_zero_w(const Certificate& p1, const ProblemSpec& spec,
                         const CheckSettings& settings);

// Lifts a proved P2 certificate to P6 via u = 1 - v, w = M u with
// M = 2 * ceil(sup_bound / delta), sup_bound an upper bound on sup_X u.
Certificate embed_supermartingale(const Certificate& p2, const ProblemSpec& spec,
                                  double sup_bound, const CheckSettings& settings);

// Certificate file I/O (JSON: prop, v, optional w, params map).
struct LoadedCertificate {
  Prop prop;
  Certificate cert;
};
LoadedCertificate load_certificate(const std::string& path,
                                   const std::vector<std::string>& state_vars);
LoadedCertificate certificate_from_json_text(const std::string& text,
                                             const std::vector<std::string>& state_vars);

}  // namespace reachcert

#endif

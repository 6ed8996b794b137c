#ifndef REACHCERT_POLY_HPP
#define REACHCERT_POLY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace reachcert {

// Exponent vector of a monomial; length equals the ambient arity.
using Exponents = std::vector<uint32_t>;

// Graded lexicographic order: compare total degree first, then exponents
// left to right. Used as the canonical term order everywhere.
struct GradedLexLess {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

class PolyError : public std::runtime_error {
 public:
  explicit PolyError(const std::string& what) : std::runtime_error(what) {}
};

// Error raised by the polynomial parser; carries the byte offset of the
// first offending character.
class ParseError : public PolyError {
 public:
  ParseError(const std::string& what, size_t offset)
      : PolyError(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_ = 0;
};

// Sparse multivariate polynomial with double coefficients over a fixed
// number of variables. Terms with coefficient exactly zero are never
// stored, so structural equality is semantic equality up to rounding.
// Immutable in spirit: all operations return new values.
class Polynomial {
 public:
  using TermMap = std::map<Exponents, double, GradedLexLess>;

  Polynomial() : arity_(0) {}
  explicit Polynomial(int arity) : arity_(arity) {
    if (arity < 0) throw PolyError("negative arity");
  }

  static Polynomial zero(int arity) { return Polynomial(arity); }
  static Polynomial constant(int arity, double c);
  static Polynomial variable(int arity, int index);

  int arity() const { return arity_; }
  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }
  int total_degree() const;  // 0 for the zero polynomial
  int degree_in(int var) const;
  const TermMap& terms() const { return terms_; }

  // Accumulates c onto the coefficient of e, pruning exact zeros.
  void add_term(const Exponents& e, double c);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(double s) const;

  bool operator==(const Polynomial& o) const {
    return arity_ == o.arity_ && terms_ == o.terms_;
  }

  double evaluate(std::span<const double> point) const;

  // Substitutes subst[i] for variable i; all substituents must share one
  // arity, which becomes the arity of the result.
  Polynomial compose(const std::vector<Polynomial>& subst) const;

  // Canonical text form: graded-lex descending, 17 significant digits.
  std::string to_string(const std::vector<std::string>& variables) const;

  // Maximum absolute coefficient (0 for the zero polynomial).
  double coeff_scale() const;

 private:
  int arity_;
  TermMap terms_;
};

// Parses the textual grammar: a sum of terms `coeff * var^exp * ...`
// joined by `+`/`-`, decimal or scientific coefficients, `^` positive
// integer powers. Total on that grammar; throws ParseError otherwise.
Polynomial parse_poly(std::string_view text,
                      const std::vector<std::string>& variables);

}  // namespace reachcert

#endif

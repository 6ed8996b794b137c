#include "reachcert/poly.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>

namespace reachcert {

bool GradedLexLess::operator()(const Exponents& a, const Exponents& b) const {
  uint64_t da = 0, db = 0;
  for (uint32_t e : a) da += e;
  for (uint32_t e : b) db += e;
  if (da != db) return da < db;
  return a < b;
}

Polynomial Polynomial::constant(int arity, double c) {
  Polynomial p(arity);
  p.add_term(Exponents(arity, 0), c);
  return p;
}

Polynomial Polynomial::variable(int arity, int index) {
  if (index < 0 || index >= arity) throw PolyError("variable index out of range");
  Polynomial p(arity);
  Exponents e(arity, 0);
  e[index] = 1;
  p.add_term(e, 1.0);
  return p;
}

int Polynomial::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) {
    int t = 0;
    for (uint32_t x : e) t += static_cast<int>(x);
    if (t > d) d = t;
  }
  return d;
}

int Polynomial::degree_in(int var) const {
  int d = 0;
  for (const auto& [e, c] : terms_)
    if (static_cast<int>(e[var]) > d) d = static_cast<int>(e[var]);
  return d;
}

void Polynomial::add_term(const Exponents& e, double c) {
  if (static_cast<int>(e.size()) != arity_) throw PolyError("exponent arity mismatch");
  if (c == 0.0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (arity_ != o.arity_) throw PolyError("arity mismatch in +");
  Polynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  if (arity_ != o.arity_) throw PolyError("arity mismatch in -");
  Polynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
  return r;
}

Polynomial Polynomial::operator-() const {
  Polynomial r(arity_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (arity_ != o.arity_) throw PolyError("arity mismatch in *");
  Polynomial r(arity_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      Exponents e(arity_);
      for (int i = 0; i < arity_; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::scaled(double s) const {
  Polynomial r(arity_);
  if (s == 0.0) return r;
  for (const auto& [e, c] : terms_) r.add_term(e, c * s);
  return r;
}

double Polynomial::evaluate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != arity_)
    throw PolyError("point arity mismatch in evaluate");
  for (double x : point)
    if (!std::isfinite(x)) throw PolyError("non-finite coordinate in evaluate");
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c;
    for (int i = 0; i < arity_; ++i) {
      uint32_t k = e[i];
      if (k == 0) continue;
      // small exponents dominate; square-and-multiply is not worth it
      double base = point[i];
      double pw = 1.0;
      while (k >= 2) {
        pw *= base;
        --k;
      }
      t *= pw * base;
    }
    sum += t;
  }
  return sum;
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& subst) const {
  if (static_cast<int>(subst.size()) != arity_)
    throw PolyError("substitution count does not match arity");
  int out_arity = subst.empty() ? 0 : subst[0].arity();
  for (const auto& s : subst)
    if (s.arity() != out_arity) throw PolyError("substituents disagree on arity");
  if (arity_ == 0) {
    Polynomial r(out_arity);
    for (const auto& [e, c] : terms_) r.add_term(Exponents(out_arity, 0), c);
    return r;
  }

  // cache powers of each substituent up to its needed degree
  std::vector<std::vector<Polynomial>> powers(arity_);
  for (int i = 0; i < arity_; ++i) {
    int d = degree_in(i);
    powers[i].reserve(d + 1);
    powers[i].push_back(Polynomial::constant(out_arity, 1.0));
    for (int k = 1; k <= d; ++k) powers[i].push_back(powers[i].back() * subst[i]);
  }

  Polynomial r(out_arity);
  for (const auto& [e, c] : terms_) {
    Polynomial t = Polynomial::constant(out_arity, c);
    for (int i = 0; i < arity_; ++i)
      if (e[i] > 0) t = t * powers[i][e[i]];
    r = r + t;
  }
  return r;
}

double Polynomial::coeff_scale() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::fabs(c));
  return m;
}

std::string Polynomial::to_string(const std::vector<std::string>& variables) const {
  if (static_cast<int>(variables.size()) != arity_)
    throw PolyError("variable name count does not match arity");
  if (terms_.empty()) return "0";
  std::string out;
  char buf[64];
  // graded-lex descending: leading term first
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    double c = it->second;
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += (c < 0) ? " - " : " + ";
    }
    std::snprintf(buf, sizeof(buf), "%.17g", std::fabs(c));
    out += buf;
    for (int i = 0; i < arity_; ++i) {
      uint32_t e = it->first[i];
      if (e == 0) continue;
      out += "*";
      out += variables[i];
      if (e > 1) {
        std::snprintf(buf, sizeof(buf), "^%u", e);
        out += buf;
      }
    }
  }
  return out;
}

namespace {

constexpr uint32_t kMaxExponent = 1u << 20;

struct Parser {
  std::string_view text;
  size_t pos = 0;
  const std::vector<std::string>& vars;

  explicit Parser(std::string_view t, const std::vector<std::string>& v)
      : text(t), vars(v) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() { return pos < text.size() ? text[pos] : '\0'; }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos); }

  double parse_number() {
    skip_ws();
    size_t start = pos;
    const char* begin = text.data() + pos;
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    pos += static_cast<size_t>(end - begin);
    if (errno == ERANGE || !std::isfinite(v)) {
      pos = start;
      fail("numeric literal out of range");
    }
    return v;
  }

  int parse_var() {
    skip_ws();
    size_t start = pos;
    if (pos >= text.size() ||
        !(std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      fail("expected a variable name");
    size_t end = pos;
    while (end < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_'))
      ++end;
    std::string_view name = text.substr(pos, end - pos);
    for (size_t i = 0; i < vars.size(); ++i) {
      if (vars[i] == name) {
        pos = end;
        return static_cast<int>(i);
      }
    }
    pos = start;
    fail("unknown variable '" + std::string(name) + "'");
  }

  uint32_t parse_exponent() {
    skip_ws();
    size_t start = pos;
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      fail("expected an integer exponent after '^'");
    uint64_t v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + static_cast<uint64_t>(text[pos] - '0');
      if (v > kMaxExponent) {
        pos = start;
        fail("exponent overflow");
      }
      ++pos;
    }
    return static_cast<uint32_t>(v);
  }

  // term := factor (* factor)* where factor := number | var[^exp]
  void parse_term(double sign, Polynomial& acc) {
    double coeff = sign;
    Exponents exps(vars.size(), 0);
    bool first = true;
    while (true) {
      skip_ws();
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        coeff *= parse_number();
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        int vi = parse_var();
        uint32_t e = 1;
        skip_ws();
        if (peek() == '^') {
          ++pos;
          e = parse_exponent();
        }
        uint64_t ne = static_cast<uint64_t>(exps[vi]) + e;
        if (ne > kMaxExponent) fail("exponent overflow");
        exps[vi] = static_cast<uint32_t>(ne);
      } else if (first) {
        fail("expected a coefficient or variable");
      }
      first = false;
      skip_ws();
      if (peek() == '*') {
        ++pos;
        continue;
      }
      break;
    }
    acc.add_term(exps, coeff);
  }

  Polynomial parse() {
    Polynomial acc(static_cast<int>(vars.size()));
    skip_ws();
    if (at_end()) fail("empty polynomial text");
    bool expect_term = true;
    double sign = 1.0;
    while (!at_end()) {
      skip_ws();
      char c = peek();
      if (c == '+' || c == '-') {
        if (expect_term) {
          // unary sign (possibly repeated)
          sign *= (c == '-') ? -1.0 : 1.0;
        } else {
          sign = (c == '-') ? -1.0 : 1.0;
          expect_term = true;
        }
        ++pos;
        continue;
      }
      if (!expect_term) fail("expected '+' or '-' between terms");
      parse_term(sign, acc);
      sign = 1.0;
      expect_term = false;
    }
    if (expect_term) fail("dangling operator at end of input");
    return acc;
  }
};

}  // namespace

Polynomial parse_poly(std::string_view text, const std::vector<std::string>& variables) {
  Parser p(text, variables);
  return p.parse();
}

}  // namespace reachcert

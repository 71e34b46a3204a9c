#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "lapinv/symbols.hpp"

namespace lapinv {

using Rational = mpq_class;

/// Power product of jet variables, factors sorted by VarId.
class Monomial {
public:
  using Factor = std::pair<VarId, std::uint32_t>;

  Monomial() = default;
  static Monomial var(VarId v, std::uint32_t exp = 1);

  const std::vector<Factor> &factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  std::uint32_t degree() const;
  std::uint32_t degree_in(VarId v) const;

  Monomial operator*(const Monomial &o) const;
  bool divides(const Monomial &o) const;
  /// Requires divides(o).
  Monomial quotient(const Monomial &o) const;
  static Monomial gcd(const Monomial &a, const Monomial &b);
  static Monomial lcm(const Monomial &a, const Monomial &b);
  Monomial without(VarId v) const;

  bool operator==(const Monomial &) const = default;
  /// Storage order (by VarId); not the canonical print order.
  bool operator<(const Monomial &o) const { return factors_ < o.factors_; }

private:
  explicit Monomial(std::vector<Factor> f) : factors_(std::move(f)) {}
  std::vector<Factor> factors_;
};

struct MonomialHash {
  std::size_t operator()(const Monomial &m) const;
};

/// Graded lexicographic comparison over the canonical variable order
/// (earlier variables are more significant). True when a > b.
bool canonical_greater(const Monomial &a, const Monomial &b);

/// Sparse multivariate polynomial over Q in jet variables.
class Polynomial {
public:
  using Term = std::pair<Monomial, Rational>;

  Polynomial() = default;
  Polynomial(const Rational &c);
  Polynomial(long c) : Polynomial(Rational(c)) {}
  static Polynomial var(VarId v);
  static Polynomial term(Monomial m, Rational c);

  const std::vector<Term> &terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Only meaningful when is_constant().
  Rational constant_value() const;
  bool is_monomial() const { return terms_.size() == 1; }
  std::uint32_t total_degree() const;

  Polynomial operator+(const Polynomial &o) const;
  Polynomial operator-(const Polynomial &o) const;
  Polynomial operator-() const;
  Polynomial operator*(const Polynomial &o) const;
  Polynomial operator*(const Rational &c) const;
  Polynomial operator*(const Monomial &m) const;
  Polynomial &operator+=(const Polynomial &o) { return *this = *this + o; }
  Polynomial pow(unsigned k) const;

  bool operator==(const Polynomial &) const = default;

  /// Formal partial derivative d/dx_i (x_i is the i-th independent variable).
  Polynomial derive(std::size_t i) const;

  /// Greatest common monomial divisor of all terms (1 for zero).
  Monomial monomial_content() const;
  /// Divides every term by m; m must divide each.
  Polynomial divide_monomial(const Monomial &m) const;
  /// Exact division; nullopt when d does not divide this polynomial.
  std::optional<Polynomial> divide_exact(const Polynomial &d) const;

  /// Term that is largest in the canonical graded-lex order.
  const Term &leading_term() const;

  std::vector<VarId> variables() const;
  std::uint32_t degree_in(VarId v) const;
  /// Coefficient of v^k, as a polynomial in the remaining variables.
  Polynomial coefficient(VarId v, std::uint32_t k) const;
  bool contains_if(const std::function<bool(VarId)> &pred) const;

  /// Terms sorted into canonical print order (descending).
  std::vector<const Term *> canonical_terms() const;
  std::string to_string() const;

private:
  static Polynomial from_unsorted(std::vector<Term> terms);
  std::vector<Term> terms_;  // sorted by Monomial storage order, no zero coefficients
};

std::string rational_to_string(const Rational &q);

} // namespace lapinv

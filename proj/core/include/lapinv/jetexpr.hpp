#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "lapinv/polynomial.hpp"

namespace lapinv {

/// Exact quotient num/den of polynomials in jet variables.
///
/// Normal form: monomial content cancelled, exact polynomial quotients
/// collapsed, denominator's canonical leading coefficient equal to 1.
/// Two expressions are equal iff their cross products agree.
class JetExpr {
public:
  JetExpr() : den_(1) {}
  JetExpr(const Rational &c) : num_(c), den_(1) {}
  JetExpr(long c) : JetExpr(Rational(c)) {}
  JetExpr(Polynomial p) : num_(std::move(p)), den_(1) {}
  /// Throws std::domain_error when den is zero.
  static JetExpr fraction(Polynomial num, Polynomial den);
  static JetExpr var(VarId v) { return JetExpr(Polynomial::var(v)); }

  const Polynomial &num() const { return num_; }
  const Polynomial &den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  /// Only meaningful when is_constant().
  Rational constant_value() const { return num_.constant_value(); }

  JetExpr operator+(const JetExpr &o) const;
  JetExpr operator-(const JetExpr &o) const;
  JetExpr operator-() const;
  JetExpr operator*(const JetExpr &o) const;
  /// Throws std::domain_error on an identically zero divisor.
  JetExpr operator/(const JetExpr &o) const;
  JetExpr &operator+=(const JetExpr &o) { return *this = *this + o; }
  JetExpr &operator-=(const JetExpr &o) { return *this = *this - o; }
  JetExpr &operator*=(const JetExpr &o) { return *this = *this * o; }
  JetExpr pow(unsigned k) const;

  /// Mathematical equality (cross-multiplication).
  bool operator==(const JetExpr &o) const;

  /// d/dx_i.
  JetExpr derive(std::size_t i) const;
  /// d^d, applying each derivation d[i] times.
  JetExpr derive(const MultiIndex &d) const;

  std::vector<VarId> variables() const;
  bool contains_if(const std::function<bool(VarId)> &pred) const;

  std::string to_string() const;

private:
  Polynomial num_, den_;
};

bool equal(const JetExpr &a, const JetExpr &b);

// Symbol constructors. `deriv` defaults to the zero multi-index.
JetExpr coeff(const MultiIndex &owner);
JetExpr coeff(const MultiIndex &owner, const MultiIndex &deriv);
JetExpr gauge_symbol(std::size_t dim);
JetExpr gauge_symbol(const MultiIndex &deriv);
JetExpr param(const std::string &name, std::size_t dim);
JetExpr param(const std::string &name, const MultiIndex &deriv);

struct CyclicBindingError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Bindings keyed by base symbol. Derived jet variables of a bound symbol are
/// replaced by the matching derivative of the binding.
using Bindings = std::map<BaseSymbol, JetExpr>;

/// Replaces each variable v for which `repl(v)` is engaged. Each replacement
/// is evaluated at most once per call.
JetExpr substitute_vars(const JetExpr &e,
                        const std::function<std::optional<JetExpr>(VarId)> &repl);

/// Substitutes bindings repeatedly until no bound symbol remains. Throws
/// CyclicBindingError when a binding depends on itself.
JetExpr substitute(const JetExpr &e, const Bindings &bindings);

/// Resolves bindings against each other so that no right-hand side mentions a
/// bound symbol.
Bindings close_bindings(const Bindings &bindings);

/// Substitution with memoized derivatives of closed bindings; reuse across
/// many expressions sharing one binding set.
class Substituter {
public:
  explicit Substituter(const Bindings &bindings);
  JetExpr operator()(const JetExpr &e);
  const Bindings &bindings() const { return closed_; }

private:
  std::optional<JetExpr> lookup(VarId v);
  Bindings closed_;
  std::map<VarId, JetExpr> cache_;
};

} // namespace lapinv

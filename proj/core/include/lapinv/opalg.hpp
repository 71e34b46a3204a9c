#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lapinv/jetexpr.hpp"

namespace lapinv {

/// Sum of c_v d^v with coefficients on the left. Zero coefficients are never
/// stored.
class DiffOperator {
public:
  using TermMap = std::map<MultiIndex, JetExpr, CanonicalLess>;

  explicit DiffOperator(std::size_t dim = 0) : dim_(dim) {}
  static DiffOperator scalar(std::size_t dim, const JetExpr &c);
  static DiffOperator derivative(const MultiIndex &v, const JetExpr &c = JetExpr(1));

  std::size_t dim() const { return dim_; }
  const TermMap &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Zero when v is not in the support.
  JetExpr coefficient(const MultiIndex &v) const;
  IndexSet support() const;
  int order() const;

  void add_term(const MultiIndex &v, const JetExpr &c);
  void set_term(const MultiIndex &v, const JetExpr &c);

  DiffOperator operator+(const DiffOperator &o) const;
  DiffOperator operator-(const DiffOperator &o) const;
  DiffOperator operator-() const;
  /// Left multiplication by a function.
  DiffOperator scaled(const JetExpr &f) const;
  DiffOperator map_coefficients(const std::function<JetExpr(const JetExpr &)> &fn) const;
  bool contains_if(const std::function<bool(VarId)> &pred) const;

  /// Coefficientwise equality.
  bool operator==(const DiffOperator &o) const;

  /// "d[2,1] + a[2,0]*d[2,0] + ..." in canonical vector order.
  std::string to_string() const;

private:
  void check_dim(const MultiIndex &v) const;
  std::size_t dim_;
  TermMap terms_;
};

/// Noncommutative product: d^u o f = sum_{b <= u} C(u,b) (d^b f) d^{u-b}.
DiffOperator op_mul(const DiffOperator &a, const DiffOperator &b);
inline DiffOperator operator*(const DiffOperator &a, const DiffOperator &b) { return op_mul(a, b); }

/// e^{-g} L e^{g} for the reserved symbolic gauge function g. Throws
/// std::invalid_argument when L already contains g.
DiffOperator gauge(const DiffOperator &L);
/// e^{-g} L e^{g} for an arbitrary expression g (d_i -> d_i + g_{x_i}).
/// Throws when both L and g mention the gauge symbol.
DiffOperator gauge_by(const DiffOperator &L, const JetExpr &g);

/// (d^{w_1} + ... + d^{w_k} + shift)^power
struct Factor {
  std::vector<MultiIndex> derivs;
  JetExpr shift;
  unsigned power = 1;
};

/// prefactor * F_1 * F_2 * ...
struct FactorProduct {
  JetExpr prefactor = JetExpr(1);
  std::vector<Factor> factors;
};

/// Sum of ordered factor products; the empty sum expands to zero.
struct FactorTemplate {
  std::size_t dim = 0;
  std::vector<FactorProduct> products;

  /// Template grammar, e.g. "(D[1,0] + q)^2*(D[0,1] + r) + a[1,1]*(D[1,0] + p)".
  std::string to_string() const;
  /// Applies `fn` to every shift and prefactor.
  FactorTemplate map_exprs(const std::function<JetExpr(const JetExpr &)> &fn) const;
};

DiffOperator expand_template(const FactorTemplate &t);

/// Parses the template grammar: a sum of products, each product a '*'-joined
/// list of scalar expressions and parenthesized factors containing one or more
/// D[...] derivative monomials plus an optional shift, optionally raised to
/// "^k".
FactorTemplate parse_template(std::string_view text, std::size_t dim);

} // namespace lapinv

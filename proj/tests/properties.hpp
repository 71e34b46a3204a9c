#pragma once

// Seeded random generators and the property checks shared by the property
// suite and the acceptance runner. Each check returns an empty string on
// success, otherwise a description of the first failing case.

#include <random>
#include <string>
#include <vector>

#include "support.hpp"

namespace props {

using namespace lapinv;

inline constexpr int kCases = 200;

class Rng {
public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g_); }
  bool coin() { return uniform(0, 1) == 1; }
  Rational small_rational(bool nonzero = true) {
    while (true) {
      Rational q(uniform(-5, 5), uniform(1, 4));
      q.canonicalize();
      if (!nonzero || q != 0)
        return q;
    }
  }
  template <class T> const T &pick(const std::vector<T> &v) {
    return v[static_cast<std::size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
  }

private:
  std::mt19937_64 g_;
};

inline MultiIndex random_vector(Rng &r, std::size_t n, int max_entry) {
  std::vector<int> e(n);
  for (auto &x : e)
    x = r.uniform(0, max_entry);
  return MultiIndex(e);
}

inline MultiIndex random_vector_of_order_at_most(Rng &r, std::size_t n, int max_order) {
  std::vector<int> e(n, 0);
  int k = r.uniform(0, max_order);
  for (int j = 0; j < k; ++j)
    ++e[static_cast<std::size_t>(r.uniform(0, static_cast<int>(n) - 1))];
  return MultiIndex(e);
}

/// Sum of a few monomials in derivatives (order <= 2) of the atoms, with an
/// optional denominator atom + c.
inline JetExpr random_expr(Rng &r, const std::vector<JetExpr> &atoms, std::size_t n,
                           bool allow_fraction = true) {
  auto atom = [&] { return r.pick(atoms).derive(random_vector_of_order_at_most(r, n, 2)); };
  JetExpr e(r.small_rational(false));
  int terms = r.uniform(1, 3);
  for (int t = 0; t < terms; ++t) {
    JetExpr m(r.small_rational());
    int factors = r.uniform(1, 2);
    for (int f = 0; f < factors; ++f)
      m *= atom();
    e += m;
  }
  if (allow_fraction && r.uniform(0, 3) == 0)
    e = e / (atom() + JetExpr(r.small_rational()));
  return e;
}

inline std::vector<JetExpr> coefficient_atoms(const ClassSpec &spec) {
  std::vector<JetExpr> atoms;
  for (const auto &v : spec.support())
    if (!spec.is_maximal(v))
      atoms.push_back(coeff(v));
  for (const auto &t : spec.maximal_terms())
    if (!t.coefficient.is_constant())
      atoms.push_back(t.coefficient);
  return atoms;
}

inline DiffOperator random_operator(Rng &r, std::size_t n, int max_order,
                                    const std::vector<JetExpr> &atoms) {
  DiffOperator L(n);
  int terms = r.uniform(1, 3);
  for (int t = 0; t < terms; ++t)
    L.add_term(random_vector_of_order_at_most(r, n, max_order), random_expr(r, atoms, n, false));
  return L;
}

/// Random antichain of 1-3 vectors in dimension 1-3 with mixed coefficients.
inline ClassSpec random_spec(Rng &r, bool positive_single = false) {
  const std::size_t n = static_cast<std::size_t>(r.uniform(1, 3));
  std::vector<MultiIndex> vs;
  int k = positive_single ? 1 : r.uniform(1, 3);
  for (int i = 0; i < k; ++i) {
    MultiIndex v = positive_single ? random_vector(r, n, 2) : random_vector(r, n, 3);
    if (positive_single)
      for (std::size_t j = 0; j < n; ++j)
        if (v[j] == 0)
          v[j] = 1;
    if (v.is_zero())
      v = MultiIndex::unit(n, 0);
    vs.push_back(v);
  }
  std::vector<MaximalTerm> terms;
  for (const auto &v : vs) {
    bool dominated = false;
    for (const auto &w : vs)
      if (below(v, w))
        dominated = true;
    for (const auto &t : terms)
      if (t.vector == v)
        dominated = true;
    if (dominated)
      continue;
    JetExpr c;
    switch (r.uniform(0, 3)) {
    case 0:
      c = JetExpr(1);
      break;
    case 1:
      c = JetExpr(r.small_rational());
      break;
    case 2:
      c = param("m" + std::to_string(terms.size()), n);
      break;
    default:
      c = coeff(v);
    }
    terms.push_back({v, c});
  }
  return ClassSpec(n, terms);
}

// ------------------------------------------------------------- checks

inline std::string check_delta_linearity_and_commutation(std::uint64_t seed, int cases = kCases) {
  std::vector<ClassSpec> specs;
  for (const char *name : {"classical_xy", "xxy", "xxy_xyy", "x3", "xyz"})
    specs.push_back(support::load_spec(name));
  std::vector<DeltaContext> ctxs;
  for (const auto &s : specs)
    ctxs.emplace_back(s);
  Rng r(seed);
  for (int c = 0; c < cases; ++c) {
    std::size_t k = static_cast<std::size_t>(r.uniform(0, static_cast<int>(specs.size()) - 1));
    const DeltaContext &ctx = ctxs[k];
    const std::size_t n = specs[k].dim();
    auto atoms = coefficient_atoms(specs[k]);
    JetExpr e = random_expr(r, atoms, n), f = random_expr(r, atoms, n);
    JetExpr q(r.small_rational());
    std::size_t i = static_cast<std::size_t>(r.uniform(0, static_cast<int>(n) - 1));
    if (!(ctx.delta(e + f) == ctx.delta(e) + ctx.delta(f)))
      return "additivity fails for E = " + e.to_string() + ", F = " + f.to_string();
    if (!(ctx.delta(q * e) == q * ctx.delta(e)))
      return "homogeneity fails for E = " + e.to_string();
    if (!(ctx.delta(e.derive(i)) == ctx.delta(e).derive(i)))
      return "commutation with d/dx" + std::to_string(i + 1) + " fails for E = " + e.to_string();
  }
  return {};
}

inline std::string check_gauge_group_action(std::uint64_t seed, int cases = kCases) {
  Rng r(seed);
  for (int c = 0; c < cases; ++c) {
    const std::size_t n = static_cast<std::size_t>(r.uniform(1, 3));
    std::vector<JetExpr> atoms;
    for (int k = 0; k < 3; ++k)
      atoms.push_back(coeff(random_vector(r, n, 2)));
    DiffOperator L = random_operator(r, n, 3, atoms);
    JetExpr g = gauge_symbol(n), h = param("h", n);
    DiffOperator lhs = gauge_by(gauge(L), h);
    DiffOperator rhs = gauge_by(L, g + h);
    if (!(lhs == rhs))
      return "gauge by g then h differs from gauge by g+h for L = " + L.to_string();
  }
  return {};
}

inline std::string check_op_mul_associativity(std::uint64_t seed, int cases = kCases) {
  Rng r(seed);
  for (int c = 0; c < cases; ++c) {
    const std::size_t n = static_cast<std::size_t>(r.uniform(1, 3));
    std::vector<JetExpr> atoms{param("u", n), param("v", n), coeff(MultiIndex(n))};
    DiffOperator a = random_operator(r, n, 3, atoms), b = random_operator(r, n, 3, atoms),
                 d = random_operator(r, n, 3, atoms);
    if (!((a * b) * d == a * (b * d)))
      return "(ab)c != a(bc) for a = " + a.to_string() + ", b = " + b.to_string() +
             ", c = " + d.to_string();
  }
  return {};
}

/// delta(a_v) = phi(v) . grad g for one class.
inline std::string check_phi_against_gauge(const ClassSpec &spec) {
  ClassAnalysis a = analyze(spec);
  DeltaContext ctx(spec);
  const std::size_t n = spec.dim();
  for (const auto &v : a.submaximal) {
    auto row = phi(a, v);
    JetExpr expected;
    for (std::size_t i = 0; i < n; ++i)
      expected += row[i] * gauge_symbol(MultiIndex::unit(n, i));
    if (!(ctx.delta(coeff(v)) == expected))
      return "delta(a" + v.to_string() + ") = " + ctx.delta(coeff(v)).to_string() +
             " but phi gives " + expected.to_string();
  }
  return {};
}

inline std::string check_phi_against_gauge_all(std::uint64_t seed, int cases = kCases) {
  for (const auto &name : support::all_fixtures())
    if (auto err = check_phi_against_gauge(support::load_spec(name)); !err.empty())
      return name + ": " + err;
  Rng r(seed);
  for (int c = 0; c < cases; ++c) {
    ClassSpec s = random_spec(r);
    if (auto err = check_phi_against_gauge(s); !err.empty())
      return "random class: " + err;
  }
  return {};
}

inline std::string check_maximal_preserved(std::uint64_t seed, int cases = kCases) {
  Rng r(seed);
  for (int c = 0; c < cases; ++c) {
    ClassSpec s = random_spec(r);
    DiffOperator G = gauge(s.generic_operator());
    for (const auto &t : s.maximal_terms())
      if (!(G.coefficient(t.vector) == t.coefficient))
        return "maximal coefficient at " + t.vector.to_string() + " changed to " +
               G.coefficient(t.vector).to_string();
  }
  return {};
}

} // namespace props

#include "lapinv/verify.hpp"

#include <random>
#include <unordered_map>

namespace lapinv {

DeltaContext::DeltaContext(const ClassSpec &spec) : spec_(spec) {
  gauged_ = gauge(spec_.generic_operator());
  for (const auto &v : spec_.support())
    if (!spec_.is_maximal(v))
      primed_.emplace(v, gauged_.coefficient(v));
}

JetExpr DeltaContext::primed(const MultiIndex &v) const {
  if (spec_.is_maximal(v))
    return spec_.coefficient_of(v);
  auto it = primed_.find(v);
  if (it == primed_.end())
    throw UnknownSymbolError("coefficient a" + v.to_string() + " is not in the class");
  return it->second;
}

void DeltaContext::check_symbols(const JetExpr &e) const {
  for (VarId id : e.variables()) {
    const JetVariable &jv = var_info(id);
    const BaseSymbol &b = jv.base;
    if (b.dim != spec_.dim())
      throw UnknownSymbolError("symbol " + jv.to_string() + " has the wrong dimension");
    if (b.is_gauge())
      throw UnknownSymbolError("expression contains the gauge symbol g");
    if (b.is_coefficient()) {
      if (primed_.count(b.owner))
        continue;
      if (spec_.is_maximal(b.owner)) {
        JetExpr c = spec_.coefficient_of(b.owner);
        if (!c.is_constant() && c == coeff(b.owner))
          continue;
      }
      throw UnknownSymbolError("coefficient " + jv.to_string() + " is not a coefficient of the class");
    }
    if (b.is_parameter()) {
      bool known = false;
      for (const auto &t : spec_.maximal_terms())
        if (!t.coefficient.is_constant() && t.coefficient == param(b.name, spec_.dim()))
          known = true;
      if (!known)
        throw UnknownSymbolError("unknown symbol " + jv.to_string());
    }
  }
}

JetExpr DeltaContext::apply(const JetExpr &e) const {
  check_symbols(e);
  std::unordered_map<VarId, JetExpr> cache;
  return substitute_vars(e, [&](VarId id) -> std::optional<JetExpr> {
    const JetVariable &jv = var_info(id);
    if (!jv.base.is_coefficient())
      return std::nullopt;
    auto it = primed_.find(jv.base.owner);
    if (it == primed_.end())
      return std::nullopt;
    auto c = cache.find(id);
    if (c != cache.end())
      return c->second;
    JetExpr d = it->second.derive(jv.deriv);
    cache.emplace(id, d);
    return d;
  });
}

JetExpr DeltaContext::delta(const JetExpr &e) const { return apply(e) - e; }

InvarianceResult is_invariant(const JetExpr &e, const DeltaContext &ctx) {
  InvarianceResult r;
  r.residual = ctx.delta(e);
  // The residual is normalized, so it vanishes iff its numerator does;
  // clearing assumption denominators cannot change that.
  r.invariant = r.residual.is_zero();
  return r;
}

// ------------------------------------------------------ numeric oracle

namespace {

// Concrete polynomial in x_1..x_n over Q.
struct XPoly {
  std::map<std::vector<int>, Rational> terms;

  void add(const std::vector<int> &e, const Rational &c) {
    if (c == 0)
      return;
    auto &slot = terms[e];
    slot += c;
    if (slot == 0)
      terms.erase(e);
  }
  XPoly operator+(const XPoly &o) const {
    XPoly r = *this;
    for (const auto &[e, c] : o.terms)
      r.add(e, c);
    return r;
  }
  XPoly operator*(const XPoly &o) const {
    XPoly r;
    for (const auto &[e1, c1] : terms)
      for (const auto &[e2, c2] : o.terms) {
        std::vector<int> e(e1.size());
        for (std::size_t i = 0; i < e.size(); ++i)
          e[i] = e1[i] + e2[i];
        r.add(e, c1 * c2);
      }
    return r;
  }
  XPoly scaled(const Rational &k) const {
    XPoly r;
    for (const auto &[e, c] : terms)
      r.add(e, c * k);
    return r;
  }
  XPoly derive(std::size_t i) const {
    XPoly r;
    for (const auto &[e, c] : terms) {
      if (e[i] == 0)
        continue;
      std::vector<int> d = e;
      --d[i];
      r.add(d, c * e[i]);
    }
    return r;
  }
  XPoly derive(const MultiIndex &d) const {
    XPoly r = *this;
    for (std::size_t i = 0; i < d.dim(); ++i)
      for (int k = 0; k < d[i]; ++k)
        r = r.derive(i);
    return r;
  }
  Rational eval(const std::vector<Rational> &x) const {
    Rational s = 0;
    for (const auto &[e, c] : terms) {
      Rational t = c;
      for (std::size_t i = 0; i < e.size(); ++i)
        for (int k = 0; k < e[i]; ++k)
          t *= x[i];
      s += t;
    }
    return s;
  }
};

using ConcreteOp = std::map<MultiIndex, XPoly, CanonicalLess>;

ConcreteOp concrete_mul(const ConcreteOp &a, const ConcreteOp &b, std::size_t n) {
  ConcreteOp r;
  for (const auto &[u, au] : a)
    for (const auto &[w, bw] : b) {
      // d^u o f = sum_{beta <= u} C(u,beta) (d^beta f) d^{u-beta}
      MultiIndex beta(n);
      while (true) {
        XPoly t = au * bw.derive(beta);
        mpz_class binom = multi_binomial(u, beta);
        auto key = u - beta + w;
        r[key] = r[key] + t.scaled(Rational(binom));
        std::size_t i = 0;
        while (i < n && beta[i] == u[i]) {
          beta[i] = 0;
          ++i;
        }
        if (i == n)
          break;
        ++beta[i];
      }
    }
  for (auto it = r.begin(); it != r.end();)
    it = it->second.terms.empty() ? r.erase(it) : std::next(it);
  return r;
}

class Sampler {
public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  Rational small_rational(bool nonzero = false) {
    std::uniform_int_distribution<int> num(-7, 7), den(1, 7);
    while (true) {
      Rational q(num(rng_), den(rng_));
      q.canonicalize();
      if (!nonzero || q != 0)
        return q;
    }
  }

  // Dense polynomial of the given total degree with nonzero coefficients, so
  // no derivative up to that order vanishes by accident.
  XPoly random_poly(std::size_t n, int degree) {
    XPoly p;
    std::vector<int> e(n, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
      if (i == n) {
        p.add(e, small_rational(true));
        return;
      }
      for (int k = 0; k <= left; ++k) {
        e[i] = k;
        rec(i + 1, left - k);
      }
      e[i] = 0;
    };
    rec(0, degree);
    if (p.terms.empty())
      p.add(std::vector<int>(n, 0), 1);
    return p;
  }

  std::vector<Rational> point(std::size_t n) {
    std::vector<Rational> x(n);
    for (auto &v : x)
      v = small_rational();
    return x;
  }

private:
  std::mt19937_64 rng_;
};

} // namespace

bool numeric_spot_check(const JetExpr &e, const DeltaContext &ctx, std::uint64_t seed,
                        const std::vector<JetExpr> &assumptions) {
  ctx.check_symbols(e);
  for (const auto &a : assumptions)
    ctx.check_symbols(a);
  const ClassSpec &spec = ctx.spec();
  const std::size_t n = spec.dim();
  Sampler rnd(seed);

  int deriv_order = 0;
  for (VarId id : e.variables())
    deriv_order = std::max(deriv_order, var_info(id).deriv.order());
  const int coeff_degree = std::max(3, deriv_order + 1);
  int op_order = 0;
  for (const auto &t : spec.maximal_terms())
    op_order = std::max(op_order, t.vector.order());
  const int gauge_degree = std::max(3, deriv_order + op_order);

  // Concrete functions for every free symbol: non-maximal coefficients and
  // symbolic maximal coefficients (parameters or a_m).
  std::map<BaseSymbol, XPoly> funcs;
  ConcreteOp L;
  for (const auto &v : spec.support()) {
    JetExpr c = spec.coefficient_of(v);
    XPoly f;
    if (c.is_constant()) {
      f.add(std::vector<int>(n, 0), c.constant_value());
    } else {
      const JetVariable &jv = var_info(c.num().terms()[0].first.factors()[0].first);
      f = rnd.random_poly(n, coeff_degree);
      funcs[jv.base] = f;
    }
    L[v] = f;
  }
  XPoly g = rnd.random_poly(n, gauge_degree);

  // Independent route: multiply out prod_i (d_i + g_{x_i})^{v_i}.
  std::map<MultiIndex, ConcreteOp, CanonicalLess> powers;
  std::function<const ConcreteOp &(const MultiIndex &)> P =
      [&](const MultiIndex &v) -> const ConcreteOp & {
    auto it = powers.find(v);
    if (it != powers.end())
      return it->second;
    ConcreteOp r;
    if (v.is_zero()) {
      XPoly one;
      one.add(std::vector<int>(n, 0), 1);
      r[MultiIndex(n)] = one;
    } else {
      std::size_t i = 0;
      while (v[i] == 0)
        ++i;
      ConcreteOp step;
      XPoly one;
      one.add(std::vector<int>(n, 0), 1);
      step[MultiIndex::unit(n, i)] = one;
      step[MultiIndex(n)] = g.derive(i);
      r = concrete_mul(P(v.minus_unit(i)), step, n);
    }
    return powers.emplace(v, std::move(r)).first->second;
  };
  ConcreteOp Lg;
  for (const auto &[v, c] : L) {
    ConcreteOp cv;
    cv[MultiIndex(n)] = c;
    for (const auto &[w, f] : concrete_mul(cv, P(v), n))
      Lg[w] = Lg[w] + f;
  }

  auto value_at = [&](const JetExpr &expr, const std::vector<Rational> &x, bool gauged) {
    return substitute_vars(expr, [&](VarId id) -> std::optional<JetExpr> {
      const JetVariable &jv = var_info(id);
      if (jv.base.is_coefficient() && !spec.is_maximal(jv.base.owner)) {
        const ConcreteOp &op = gauged ? Lg : L;
        auto it = op.find(jv.base.owner);
        XPoly f = it == op.end() ? XPoly{} : it->second;
        return JetExpr(f.derive(jv.deriv).eval(x));
      }
      auto it = funcs.find(jv.base);
      if (it == funcs.end())
        throw UnknownSymbolError("no instantiation for " + jv.to_string());
      return JetExpr(it->second.derive(jv.deriv).eval(x));
    });
  };

  const int wanted = 3, max_tries = 60;
  int good = 0;
  for (int tries = 0; tries < max_tries && good < wanted; ++tries) {
    std::vector<Rational> x = rnd.point(n);
    try {
      bool degenerate = false;
      for (const auto &a : assumptions)
        if (value_at(a, x, false).is_zero())
          degenerate = true;
      if (degenerate)
        continue;
      JetExpr before = value_at(e, x, false);
      JetExpr after = value_at(e, x, true);
      if (!(before == after))
        return false;
      ++good;
    } catch (const std::domain_error &) {
      // a denominator vanished at this point; resample
    }
  }
  if (good == 0)
    throw std::runtime_error("numeric spot check: no admissible sample point found");
  return true;
}

} // namespace lapinv

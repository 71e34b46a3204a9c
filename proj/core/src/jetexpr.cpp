#include "lapinv/jetexpr.hpp"

#include <algorithm>
#include <unordered_map>

namespace lapinv {

namespace {

struct Normalized {
  Polynomial num, den;
};

Normalized normalize(Polynomial num, Polynomial den) {
  if (den.is_zero())
    throw std::domain_error("division by an identically zero expression");
  if (num.is_zero())
    return {Polynomial{}, Polynomial(1)};
  if (den.is_constant())
    return {num * (Rational(1) / den.constant_value()), Polynomial(1)};
  Monomial g = Monomial::gcd(num.monomial_content(), den.monomial_content());
  if (!g.is_one()) {
    num = num.divide_monomial(g);
    den = den.divide_monomial(g);
  }
  if (den.is_constant())
    return {num * (Rational(1) / den.constant_value()), Polynomial(1)};
  if (!den.is_monomial() && num.size() >= den.size()) {
    if (auto q = num.divide_exact(den))
      return {std::move(*q), Polynomial(1)};
  }
  Rational lc = den.leading_term().second;
  if (lc != 1) {
    Rational inv = Rational(1) / lc;
    num = num * inv;
    den = den * inv;
  }
  return {std::move(num), std::move(den)};
}

} // namespace

JetExpr JetExpr::fraction(Polynomial num, Polynomial den) {
  auto n = normalize(std::move(num), std::move(den));
  JetExpr e;
  e.num_ = std::move(n.num);
  e.den_ = std::move(n.den);
  return e;
}

JetExpr JetExpr::operator+(const JetExpr &o) const {
  if (o.is_zero())
    return *this;
  if (is_zero())
    return o;
  if (den_ == o.den_)
    return fraction(num_ + o.num_, den_);
  if (den_.is_monomial() && o.den_.is_monomial()) {
    const Monomial &b = den_.terms()[0].first;
    const Monomial &d = o.den_.terms()[0].first;
    Monomial l = Monomial::lcm(b, d);
    Rational cb = den_.terms()[0].second, cd = o.den_.terms()[0].second;
    // den coefficients are 1 after normalization, but stay general here
    Polynomial n = num_ * l.quotient(b) * (Rational(1) / cb) + o.num_ * l.quotient(d) * (Rational(1) / cd);
    return fraction(std::move(n), Polynomial::term(l, 1));
  }
  if (!o.den_.is_constant() && den_.size() >= o.den_.size()) {
    if (auto q = den_.divide_exact(o.den_))
      return fraction(num_ + o.num_ * *q, den_);
  }
  if (!den_.is_constant() && o.den_.size() >= den_.size()) {
    if (auto q = o.den_.divide_exact(den_))
      return fraction(num_ * *q + o.num_, o.den_);
  }
  return fraction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

JetExpr JetExpr::operator-() const {
  JetExpr r = *this;
  r.num_ = -r.num_;
  return r;
}

JetExpr JetExpr::operator-(const JetExpr &o) const { return *this + (-o); }

JetExpr JetExpr::operator*(const JetExpr &o) const {
  if (is_zero() || o.is_zero())
    return {};
  if (is_polynomial() && o.is_polynomial())
    return JetExpr(num_ * o.num_);
  return fraction(num_ * o.num_, den_ * o.den_);
}

JetExpr JetExpr::operator/(const JetExpr &o) const {
  if (o.is_zero())
    throw std::domain_error("division by an identically zero expression");
  return fraction(num_ * o.den_, den_ * o.num_);
}

JetExpr JetExpr::pow(unsigned k) const {
  JetExpr r;
  r.num_ = num_.pow(k);
  r.den_ = den_.pow(k);
  return r;
}

bool JetExpr::operator==(const JetExpr &o) const {
  if (den_ == o.den_)
    return num_ == o.num_;
  return num_ * o.den_ == o.num_ * den_;
}

bool equal(const JetExpr &a, const JetExpr &b) { return a == b; }

JetExpr JetExpr::derive(std::size_t i) const {
  if (is_polynomial())
    return JetExpr(num_.derive(i));
  Polynomial n = num_.derive(i) * den_ - num_ * den_.derive(i);
  return fraction(std::move(n), den_ * den_);
}

JetExpr JetExpr::derive(const MultiIndex &d) const {
  JetExpr r = *this;
  for (std::size_t i = 0; i < d.dim(); ++i)
    for (int k = 0; k < d[i]; ++k)
      r = r.derive(i);
  return r;
}

std::vector<VarId> JetExpr::variables() const {
  auto v = num_.variables();
  auto w = den_.variables();
  v.insert(v.end(), w.begin(), w.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool JetExpr::contains_if(const std::function<bool(VarId)> &pred) const {
  return num_.contains_if(pred) || den_.contains_if(pred);
}

namespace {

bool bare_denominator(const Polynomial &d) {
  if (!d.is_monomial() || d.terms()[0].second != 1)
    return false;
  return d.terms()[0].first.factors().size() == 1;
}

} // namespace

std::string JetExpr::to_string() const {
  if (is_polynomial())
    return num_.to_string();
  std::string n = num_.to_string();
  if (num_.size() > 1)
    n = "(" + n + ")";
  std::string d = den_.to_string();
  if (!bare_denominator(den_))
    d = "(" + d + ")";
  return n + "/" + d;
}

// ------------------------------------------------------------- symbols

namespace {

JetExpr make_var(const BaseSymbol &b, const MultiIndex &d) {
  return JetExpr::var(intern(JetVariable{b, d}));
}

} // namespace

JetExpr coeff(const MultiIndex &owner) {
  return make_var(BaseSymbol::coefficient(owner), MultiIndex(owner.dim()));
}

JetExpr coeff(const MultiIndex &owner, const MultiIndex &deriv) {
  require_same_dim(owner, deriv);
  return make_var(BaseSymbol::coefficient(owner), deriv);
}

JetExpr gauge_symbol(std::size_t dim) { return make_var(BaseSymbol::gauge(dim), MultiIndex(dim)); }

JetExpr gauge_symbol(const MultiIndex &deriv) {
  return make_var(BaseSymbol::gauge(deriv.dim()), deriv);
}

JetExpr param(const std::string &name, std::size_t dim) {
  return make_var(BaseSymbol::parameter(name, dim), MultiIndex(dim));
}

JetExpr param(const std::string &name, const MultiIndex &deriv) {
  return make_var(BaseSymbol::parameter(name, deriv.dim()), deriv);
}

// -------------------------------------------------------- substitution

namespace {

class PolyEvaluator {
public:
  explicit PolyEvaluator(const std::unordered_map<VarId, JetExpr> &repl) : repl_(repl) {}

  // Value of p as a fraction; denominators are products of powers of the
  // replacement denominators.
  JetExpr eval(const Polynomial &p) {
    std::map<VarId, std::uint32_t> max_deg;
    for (const auto &t : p.terms())
      for (const auto &f : t.first.factors()) {
        auto it = repl_.find(f.first);
        if (it != repl_.end() && !it->second.is_polynomial())
          max_deg[f.first] = std::max(max_deg[f.first], f.second);
      }
    std::vector<Polynomial::Term> kept;
    Polynomial acc;
    for (const auto &t : p.terms()) {
      Polynomial val(t.second);
      Monomial rest;
      std::map<VarId, std::uint32_t> used;
      for (const auto &f : t.first.factors()) {
        auto it = repl_.find(f.first);
        if (it == repl_.end()) {
          rest = rest * Monomial::var(f.first, f.second);
          continue;
        }
        val = val * num_power(f.first, f.second);
        if (!it->second.is_polynomial())
          used[f.first] = f.second;
      }
      for (const auto &[v, d] : max_deg) {
        auto u = used.find(v);
        std::uint32_t e = (u == used.end()) ? 0 : u->second;
        if (d > e)
          val = val * den_power(v, d - e);
      }
      acc += val * rest;
    }
    Polynomial den(1);
    for (const auto &[v, d] : max_deg)
      den = den * den_power(v, d);
    return JetExpr::fraction(std::move(acc), std::move(den));
  }

private:
  const Polynomial &num_power(VarId v, std::uint32_t k) { return power(num_pows_, v, k, true); }
  const Polynomial &den_power(VarId v, std::uint32_t k) { return power(den_pows_, v, k, false); }

  const Polynomial &power(std::unordered_map<VarId, std::vector<Polynomial>> &cache, VarId v,
                          std::uint32_t k, bool numerator) {
    auto &vec = cache[v];
    const JetExpr &r = repl_.at(v);
    if (vec.empty())
      vec.push_back(Polynomial(1));
    while (vec.size() <= k)
      vec.push_back(vec.back() * (numerator ? r.num() : r.den()));
    return vec[k];
  }

  const std::unordered_map<VarId, JetExpr> &repl_;
  std::unordered_map<VarId, std::vector<Polynomial>> num_pows_, den_pows_;
};

} // namespace

JetExpr substitute_vars(const JetExpr &e,
                        const std::function<std::optional<JetExpr>(VarId)> &repl) {
  std::unordered_map<VarId, JetExpr> table;
  for (VarId v : e.variables())
    if (auto r = repl(v))
      table.emplace(v, std::move(*r));
  if (table.empty())
    return e;
  PolyEvaluator ev(table);
  JetExpr n = ev.eval(e.num());
  if (e.is_polynomial())
    return n;
  return n / ev.eval(e.den());
}

namespace {

bool mentions_bound(const JetExpr &e, const Bindings &b) {
  return e.contains_if([&](VarId v) { return b.count(var_info(v).base) > 0; });
}

// One substitution pass using the raw (possibly unresolved) bindings.
JetExpr substitute_once(const JetExpr &e, const Bindings &b) {
  return substitute_vars(e, [&](VarId v) -> std::optional<JetExpr> {
    const JetVariable &jv = var_info(v);
    auto it = b.find(jv.base);
    if (it == b.end())
      return std::nullopt;
    return it->second.derive(jv.deriv);
  });
}

} // namespace

Bindings close_bindings(const Bindings &bindings) {
  Bindings cur = bindings;
  for (std::size_t round = 0; round <= bindings.size(); ++round) {
    bool dirty = false;
    for (auto &[sym, rhs] : cur)
      if (mentions_bound(rhs, cur)) {
        dirty = true;
        break;
      }
    if (!dirty)
      return cur;
    Bindings next;
    for (const auto &[sym, rhs] : cur)
      next.emplace(sym, substitute_once(rhs, cur));
    cur = std::move(next);
  }
  for (const auto &[sym, rhs] : cur)
    if (mentions_bound(rhs, cur))
      throw CyclicBindingError("cyclic binding for symbol " + sym.to_string());
  return cur;
}

Substituter::Substituter(const Bindings &bindings) : closed_(close_bindings(bindings)) {}

std::optional<JetExpr> Substituter::lookup(VarId v) {
  if (auto it = cache_.find(v); it != cache_.end())
    return it->second;
  const JetVariable jv = var_info(v);
  auto b = closed_.find(jv.base);
  if (b == closed_.end())
    return std::nullopt;
  JetExpr value;
  if (jv.deriv.is_zero()) {
    value = b->second;
  } else {
    std::size_t i = 0;
    while (jv.deriv[i] == 0)
      ++i;
    VarId parent = intern(JetVariable{jv.base, jv.deriv.minus_unit(i)});
    value = lookup(parent)->derive(i);
  }
  cache_.emplace(v, value);
  return value;
}

JetExpr Substituter::operator()(const JetExpr &e) {
  if (closed_.empty())
    return e;
  return substitute_vars(e, [this](VarId v) { return lookup(v); });
}

JetExpr substitute(const JetExpr &e, const Bindings &bindings) {
  if (bindings.empty())
    return e;
  Substituter s(bindings);
  return s(e);
}

} // namespace lapinv

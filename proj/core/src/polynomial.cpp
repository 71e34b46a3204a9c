#include "lapinv/polynomial.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace lapinv {

// ---------------------------------------------------------------- Monomial

Monomial Monomial::var(VarId v, std::uint32_t exp) {
  if (exp == 0)
    return {};
  return Monomial({{v, exp}});
}

std::uint32_t Monomial::degree() const {
  std::uint32_t d = 0;
  for (const auto &f : factors_)
    d += f.second;
  return d;
}

std::uint32_t Monomial::degree_in(VarId v) const {
  for (const auto &f : factors_)
    if (f.first == v)
      return f.second;
  return 0;
}

Monomial Monomial::operator*(const Monomial &o) const {
  std::vector<Factor> r;
  r.reserve(factors_.size() + o.factors_.size());
  auto a = factors_.begin(), b = o.factors_.begin();
  while (a != factors_.end() && b != o.factors_.end()) {
    if (a->first < b->first)
      r.push_back(*a++);
    else if (b->first < a->first)
      r.push_back(*b++);
    else {
      r.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  r.insert(r.end(), a, factors_.end());
  r.insert(r.end(), b, o.factors_.end());
  return Monomial(std::move(r));
}

bool Monomial::divides(const Monomial &o) const {
  auto b = o.factors_.begin();
  for (const auto &f : factors_) {
    while (b != o.factors_.end() && b->first < f.first)
      ++b;
    if (b == o.factors_.end() || b->first != f.first || b->second < f.second)
      return false;
  }
  return true;
}

Monomial Monomial::quotient(const Monomial &o) const {
  std::vector<Factor> r;
  auto b = o.factors_.begin();
  for (const auto &f : factors_) {
    while (b != o.factors_.end() && b->first < f.first)
      ++b;
    std::uint32_t e = f.second;
    if (b != o.factors_.end() && b->first == f.first)
      e -= b->second;
    if (e)
      r.emplace_back(f.first, e);
  }
  return Monomial(std::move(r));
}

Monomial Monomial::gcd(const Monomial &a, const Monomial &b) {
  std::vector<Factor> r;
  auto j = b.factors_.begin();
  for (const auto &f : a.factors_) {
    while (j != b.factors_.end() && j->first < f.first)
      ++j;
    if (j != b.factors_.end() && j->first == f.first)
      r.emplace_back(f.first, std::min(f.second, j->second));
  }
  return Monomial(std::move(r));
}

Monomial Monomial::lcm(const Monomial &a, const Monomial &b) {
  return (a * b).quotient(gcd(a, b));
}

Monomial Monomial::without(VarId v) const {
  std::vector<Factor> r;
  for (const auto &f : factors_)
    if (f.first != v)
      r.push_back(f);
  return Monomial(std::move(r));
}

std::size_t MonomialHash::operator()(const Monomial &m) const {
  std::size_t h = 0xcbf29ce484222325ull;
  for (const auto &f : m.factors()) {
    h ^= f.first + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= f.second + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

namespace {

std::vector<Monomial::Factor> canonical_factors(const Monomial &m) {
  auto f = m.factors();
  auto &table = VarTable::instance();
  std::sort(f.begin(), f.end(),
            [&](const auto &x, const auto &y) { return table.less(x.first, y.first); });
  return f;
}

bool canonical_greater_sorted(std::uint32_t da, const std::vector<Monomial::Factor> &fa,
                              std::uint32_t db, const std::vector<Monomial::Factor> &fb) {
  if (da != db)
    return da > db;
  auto &table = VarTable::instance();
  std::size_t i = 0;
  for (; i < fa.size() && i < fb.size(); ++i) {
    if (fa[i].first != fb[i].first)
      return table.less(fa[i].first, fb[i].first);
    if (fa[i].second != fb[i].second)
      return fa[i].second > fb[i].second;
  }
  return i < fa.size();
}

// Lex order on storage (VarId) order; used only for exact division.
bool lex_greater(const Monomial &a, const Monomial &b) {
  const auto &fa = a.factors();
  const auto &fb = b.factors();
  std::size_t i = 0;
  for (; i < fa.size() && i < fb.size(); ++i) {
    if (fa[i].first != fb[i].first)
      return fa[i].first < fb[i].first;
    if (fa[i].second != fb[i].second)
      return fa[i].second > fb[i].second;
  }
  return i < fa.size();
}

} // namespace

bool canonical_greater(const Monomial &a, const Monomial &b) {
  return canonical_greater_sorted(a.degree(), canonical_factors(a), b.degree(),
                                  canonical_factors(b));
}

// -------------------------------------------------------------- Polynomial

Polynomial::Polynomial(const Rational &c) {
  if (c != 0)
    terms_.emplace_back(Monomial{}, c);
}

Polynomial Polynomial::var(VarId v) { return term(Monomial::var(v), 1); }

Polynomial Polynomial::term(Monomial m, Rational c) {
  Polynomial p;
  if (c != 0)
    p.terms_.emplace_back(std::move(m), std::move(c));
  return p;
}

Polynomial Polynomial::from_unsorted(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term &a, const Term &b) { return a.first < b.first; });
  Polynomial p;
  for (auto &t : terms) {
    if (!p.terms_.empty() && p.terms_.back().first == t.first)
      p.terms_.back().second += t.second;
    else
      p.terms_.push_back(std::move(t));
  }
  std::erase_if(p.terms_, [](const Term &t) { return t.second == 0; });
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one());
}

Rational Polynomial::constant_value() const {
  for (const auto &t : terms_)
    if (t.first.is_one())
      return t.second;
  return 0;
}

std::uint32_t Polynomial::total_degree() const {
  std::uint32_t d = 0;
  for (const auto &t : terms_)
    d = std::max(d, t.first.degree());
  return d;
}

Polynomial Polynomial::operator+(const Polynomial &o) const {
  Polynomial r;
  r.terms_.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin(), b = o.terms_.begin();
  while (a != terms_.end() && b != o.terms_.end()) {
    if (a->first < b->first)
      r.terms_.push_back(*a++);
    else if (b->first < a->first)
      r.terms_.push_back(*b++);
    else {
      Rational c = a->second + b->second;
      if (c != 0)
        r.terms_.emplace_back(a->first, std::move(c));
      ++a;
      ++b;
    }
  }
  r.terms_.insert(r.terms_.end(), a, terms_.end());
  r.terms_.insert(r.terms_.end(), b, o.terms_.end());
  return r;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto &t : r.terms_)
    t.second = -t.second;
  return r;
}

Polynomial Polynomial::operator-(const Polynomial &o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Rational &c) const {
  if (c == 0)
    return {};
  Polynomial r = *this;
  for (auto &t : r.terms_)
    t.second *= c;
  return r;
}

Polynomial Polynomial::operator*(const Monomial &m) const {
  Polynomial r;
  r.terms_.reserve(terms_.size());
  for (const auto &t : terms_)
    r.terms_.emplace_back(t.first * m, t.second);
  // multiplying by a monomial can reorder terms
  std::sort(r.terms_.begin(), r.terms_.end(),
            [](const Term &a, const Term &b) { return a.first < b.first; });
  return r;
}

Polynomial Polynomial::operator*(const Polynomial &o) const {
  if (is_zero() || o.is_zero())
    return {};
  if (o.is_constant())
    return *this * o.terms_[0].second;
  if (is_constant())
    return o * terms_[0].second;
  std::unordered_map<Monomial, Rational, MonomialHash> acc;
  acc.reserve(terms_.size() * o.terms_.size());
  for (const auto &a : terms_)
    for (const auto &b : o.terms_) {
      auto [it, fresh] = acc.try_emplace(a.first * b.first, a.second);
      if (fresh)
        it->second *= b.second;
      else
        it->second += a.second * b.second;
    }
  std::vector<Term> v;
  v.reserve(acc.size());
  for (auto &kv : acc)
    if (kv.second != 0)
      v.emplace_back(kv.first, std::move(kv.second));
  std::sort(v.begin(), v.end(), [](const Term &a, const Term &b) { return a.first < b.first; });
  Polynomial r;
  r.terms_ = std::move(v);
  return r;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial r(1), base = *this;
  while (k) {
    if (k & 1u)
      r = r * base;
    k >>= 1u;
    if (k)
      base = base * base;
  }
  return r;
}

Polynomial Polynomial::derive(std::size_t i) const {
  auto &table = VarTable::instance();
  std::vector<Term> out;
  for (const auto &t : terms_) {
    for (const auto &f : t.first.factors()) {
      VarId dv = table.derive(f.first, i);
      Monomial rest = t.first.without(f.first);
      if (f.second > 1)
        rest = rest * Monomial::var(f.first, f.second - 1);
      out.emplace_back(rest * Monomial::var(dv), t.second * f.second);
    }
  }
  return from_unsorted(std::move(out));
}

Monomial Polynomial::monomial_content() const {
  if (terms_.empty())
    return {};
  Monomial g = terms_[0].first;
  for (std::size_t i = 1; i < terms_.size() && !g.is_one(); ++i)
    g = Monomial::gcd(g, terms_[i].first);
  return g;
}

Polynomial Polynomial::divide_monomial(const Monomial &m) const {
  if (m.is_one())
    return *this;
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto &t : terms_) {
    if (!m.divides(t.first))
      throw std::logic_error("divide_monomial: monomial does not divide term");
    out.emplace_back(t.first.quotient(m), t.second);
  }
  return from_unsorted(std::move(out));
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial &d) const {
  if (d.is_zero())
    throw std::domain_error("polynomial division by zero");
  if (is_zero())
    return Polynomial{};
  if (d.is_constant())
    return *this * (Rational(1) / d.terms_[0].second);
  auto lead = [](const Polynomial &p) -> const Term & {
    const Term *best = &p.terms_[0];
    for (const auto &t : p.terms_)
      if (lex_greater(t.first, best->first))
        best = &t;
    return *best;
  };
  const Term &ld = lead(d);
  Polynomial rem = *this, quot;
  // Each step cancels the lex-leading term of rem, so this terminates.
  while (!rem.is_zero()) {
    const Term &lr = lead(rem);
    if (!ld.first.divides(lr.first))
      return std::nullopt;
    Polynomial t = term(lr.first.quotient(ld.first), lr.second / ld.second);
    quot += t;
    rem = rem - t * d;
  }
  return quot;
}

const Polynomial::Term &Polynomial::leading_term() const {
  if (terms_.empty())
    throw std::logic_error("leading term of zero polynomial");
  const Term *best = &terms_[0];
  auto bf = canonical_factors(best->first);
  auto bd = best->first.degree();
  for (std::size_t i = 1; i < terms_.size(); ++i) {
    auto f = canonical_factors(terms_[i].first);
    auto d = terms_[i].first.degree();
    if (canonical_greater_sorted(d, f, bd, bf)) {
      best = &terms_[i];
      bf = std::move(f);
      bd = d;
    }
  }
  return *best;
}

std::vector<VarId> Polynomial::variables() const {
  std::vector<VarId> v;
  for (const auto &t : terms_)
    for (const auto &f : t.first.factors())
      v.push_back(f.first);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::uint32_t Polynomial::degree_in(VarId v) const {
  std::uint32_t d = 0;
  for (const auto &t : terms_)
    d = std::max(d, t.first.degree_in(v));
  return d;
}

Polynomial Polynomial::coefficient(VarId v, std::uint32_t k) const {
  std::vector<Term> out;
  for (const auto &t : terms_)
    if (t.first.degree_in(v) == k)
      out.emplace_back(t.first.without(v), t.second);
  return from_unsorted(std::move(out));
}

bool Polynomial::contains_if(const std::function<bool(VarId)> &pred) const {
  for (const auto &t : terms_)
    for (const auto &f : t.first.factors())
      if (pred(f.first))
        return true;
  return false;
}

std::vector<const Polynomial::Term *> Polynomial::canonical_terms() const {
  struct Keyed {
    const Term *t;
    std::uint32_t deg;
    std::vector<Monomial::Factor> f;
  };
  std::vector<Keyed> k;
  k.reserve(terms_.size());
  for (const auto &t : terms_)
    k.push_back({&t, t.first.degree(), canonical_factors(t.first)});
  std::sort(k.begin(), k.end(), [](const Keyed &a, const Keyed &b) {
    return canonical_greater_sorted(a.deg, a.f, b.deg, b.f);
  });
  std::vector<const Term *> out;
  out.reserve(k.size());
  for (auto &x : k)
    out.push_back(x.t);
  return out;
}

std::string rational_to_string(const Rational &q) {
  if (q.get_den() == 1)
    return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string Polynomial::to_string() const {
  if (terms_.empty())
    return "0";
  std::string s;
  bool first = true;
  for (const Term *t : canonical_terms()) {
    Rational c = t->second;
    if (first) {
      if (c < 0) {
        s += "-";
        c = -c;
      }
    } else {
      s += c < 0 ? " - " : " + ";
      c = abs(c);
    }
    first = false;
    bool unit = (c == 1);
    if (!unit || t->first.is_one()) {
      s += rational_to_string(c);
      if (!t->first.is_one())
        s += "*";
    }
    bool firstf = true;
    for (const auto &f : canonical_factors(t->first)) {
      if (!firstf)
        s += "*";
      firstf = false;
      s += var_info(f.first).to_string();
      if (f.second > 1)
        s += "^" + std::to_string(f.second);
    }
  }
  return s;
}

} // namespace lapinv

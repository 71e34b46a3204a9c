#include "lapinv/opalg.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "lapinv/parser.hpp"

namespace lapinv {

// ---------------------------------------------------------- DiffOperator

DiffOperator DiffOperator::scalar(std::size_t dim, const JetExpr &c) {
  DiffOperator d(dim);
  d.add_term(MultiIndex(dim), c);
  return d;
}

DiffOperator DiffOperator::derivative(const MultiIndex &v, const JetExpr &c) {
  DiffOperator d(v.dim());
  d.add_term(v, c);
  return d;
}

void DiffOperator::check_dim(const MultiIndex &v) const {
  if (v.dim() != dim_)
    throw DimensionError("operator of dimension " + std::to_string(dim_) + " got vector " +
                         v.to_string());
}

JetExpr DiffOperator::coefficient(const MultiIndex &v) const {
  check_dim(v);
  auto it = terms_.find(v);
  return it == terms_.end() ? JetExpr() : it->second;
}

IndexSet DiffOperator::support() const {
  IndexSet s;
  for (const auto &t : terms_)
    s.insert(t.first);
  return s;
}

int DiffOperator::order() const {
  int o = -1;
  for (const auto &t : terms_)
    o = std::max(o, t.first.order());
  return o;
}

void DiffOperator::add_term(const MultiIndex &v, const JetExpr &c) {
  check_dim(v);
  if (c.is_zero())
    return;
  auto it = terms_.find(v);
  if (it == terms_.end()) {
    terms_.emplace(v, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero())
    terms_.erase(it);
}

void DiffOperator::set_term(const MultiIndex &v, const JetExpr &c) {
  check_dim(v);
  if (c.is_zero())
    terms_.erase(v);
  else
    terms_[v] = c;
}

DiffOperator DiffOperator::operator+(const DiffOperator &o) const {
  if (o.dim_ != dim_)
    throw DimensionError("operator dimension mismatch");
  DiffOperator r = *this;
  for (const auto &[v, c] : o.terms_)
    r.add_term(v, c);
  return r;
}

DiffOperator DiffOperator::operator-() const {
  DiffOperator r(dim_);
  for (const auto &[v, c] : terms_)
    r.terms_.emplace(v, -c);
  return r;
}

DiffOperator DiffOperator::operator-(const DiffOperator &o) const { return *this + (-o); }

DiffOperator DiffOperator::scaled(const JetExpr &f) const {
  DiffOperator r(dim_);
  if (f.is_zero())
    return r;
  for (const auto &[v, c] : terms_)
    r.terms_.emplace(v, f * c);
  return r;
}

DiffOperator DiffOperator::map_coefficients(
    const std::function<JetExpr(const JetExpr &)> &fn) const {
  DiffOperator r(dim_);
  for (const auto &[v, c] : terms_)
    r.set_term(v, fn(c));
  return r;
}

bool DiffOperator::contains_if(const std::function<bool(VarId)> &pred) const {
  for (const auto &t : terms_)
    if (t.second.contains_if(pred))
      return true;
  return false;
}

bool DiffOperator::operator==(const DiffOperator &o) const {
  if (dim_ != o.dim_ || terms_.size() != o.terms_.size())
    return false;
  for (const auto &[v, c] : terms_) {
    auto it = o.terms_.find(v);
    if (it == o.terms_.end() || !(it->second == c))
      return false;
  }
  return true;
}

std::string DiffOperator::to_string() const {
  if (terms_.empty())
    return "0";
  std::string s;
  for (const auto &[v, c] : terms_) {
    if (!s.empty())
      s += " + ";
    std::string cs = c.to_string();
    if (v.is_zero()) {
      s += "(" + cs + ")";
    } else {
      if (!(c.is_constant() && c.constant_value() == 1))
        s += "(" + cs + ")*";
      s += "D" + v.to_string();
    }
  }
  return s;
}

// -------------------------------------------------------------- products

namespace {

// Enumerates every b with 0 <= b <= u.
template <class Fn> void for_each_below(const MultiIndex &u, Fn &&fn) {
  const std::size_t n = u.dim();
  MultiIndex b(n);
  while (true) {
    fn(b);
    std::size_t i = 0;
    while (i < n && b[i] == u[i]) {
      b[i] = 0;
      ++i;
    }
    if (i == n)
      return;
    ++b[i];
  }
}

// Memoized derivatives d^b f of one expression.
class DerivativeCache {
public:
  explicit DerivativeCache(const JetExpr &f) : base_(f) {}

  const JetExpr &get(const MultiIndex &b) {
    auto it = cache_.find(b);
    if (it != cache_.end())
      return it->second;
    if (b.is_zero())
      return cache_.emplace(b, base_).first->second;
    std::size_t i = 0;
    while (b[i] == 0)
      ++i;
    JetExpr d = get(b.minus_unit(i)).derive(i);
    return cache_.emplace(b, std::move(d)).first->second;
  }

private:
  JetExpr base_;
  std::unordered_map<MultiIndex, JetExpr, MultiIndexHash> cache_;
};

} // namespace

DiffOperator op_mul(const DiffOperator &a, const DiffOperator &b) {
  if (a.dim() != b.dim())
    throw DimensionError("operator dimension mismatch in product");
  DiffOperator r(a.dim());
  std::vector<std::pair<MultiIndex, DerivativeCache>> bcache;
  bcache.reserve(b.terms().size());
  for (const auto &[w, bw] : b.terms())
    bcache.emplace_back(w, DerivativeCache(bw));
  for (const auto &[u, au] : a.terms()) {
    for (auto &[w, cache] : bcache) {
      for_each_below(u, [&](const MultiIndex &beta) {
        const JetExpr &db = cache.get(beta);
        if (db.is_zero())
          return;
        JetExpr c = au * db;
        mpz_class binom = multi_binomial(u, beta);
        if (binom != 1)
          c = c * JetExpr(Rational(binom));
        r.add_term(u - beta + w, c);
      });
    }
  }
  return r;
}

namespace {

bool has_gauge(VarId v) { return var_info(v).base.is_gauge(); }

} // namespace

DiffOperator gauge_by(const DiffOperator &L, const JetExpr &g) {
  if (g.contains_if(has_gauge) && L.contains_if(has_gauge))
    throw std::invalid_argument("operator already contains the gauge symbol g");
  const std::size_t n = L.dim();
  std::vector<JetExpr> grad;
  for (std::size_t i = 0; i < n; ++i)
    grad.push_back(g.derive(i));
  // Y_b = e^{-g} d^b(e^g), with Y_{b+e_i} = d_i Y_b + g_{x_i} Y_b.
  std::unordered_map<MultiIndex, JetExpr, MultiIndexHash> Y;
  std::function<const JetExpr &(const MultiIndex &)> y = [&](const MultiIndex &b) -> const JetExpr & {
    auto it = Y.find(b);
    if (it != Y.end())
      return it->second;
    if (b.is_zero())
      return Y.emplace(b, JetExpr(1)).first->second;
    std::size_t i = 0;
    while (b[i] == 0)
      ++i;
    const JetExpr &prev = y(b.minus_unit(i));
    JetExpr v = prev.derive(i) + grad[i] * prev;
    return Y.emplace(b, std::move(v)).first->second;
  };
  DiffOperator r(n);
  for (const auto &[v, c] : L.terms()) {
    for_each_below(v, [&](const MultiIndex &beta) {
      JetExpr t = c * y(beta);
      mpz_class binom = multi_binomial(v, beta);
      if (binom != 1)
        t = t * JetExpr(Rational(binom));
      r.add_term(v - beta, t);
    });
  }
  return r;
}

DiffOperator gauge(const DiffOperator &L) {
  if (L.contains_if(has_gauge))
    throw std::invalid_argument("operator already contains the gauge symbol g");
  return gauge_by(L, gauge_symbol(L.dim()));
}

// ------------------------------------------------------------- templates

namespace {

DiffOperator factor_operator(const Factor &f, std::size_t dim) {
  DiffOperator op(dim);
  for (const auto &w : f.derivs)
    op.add_term(w, JetExpr(1));
  op.add_term(MultiIndex(dim), f.shift);
  return op;
}

bool simple_expr(const std::string &s) {
  for (char c : s)
    if (c == ' ' || c == '*' || c == '/' || c == '^' || c == '-')
      return false;
  return true;
}

} // namespace

DiffOperator expand_template(const FactorTemplate &t) {
  DiffOperator sum(t.dim);
  for (const auto &p : t.products) {
    DiffOperator prod = DiffOperator::scalar(t.dim, p.prefactor);
    for (const auto &f : p.factors) {
      DiffOperator fo = factor_operator(f, t.dim);
      for (unsigned k = 0; k < f.power; ++k)
        prod = op_mul(prod, fo);
    }
    sum = sum + prod;
  }
  return sum;
}

std::string FactorTemplate::to_string() const {
  if (products.empty())
    return "0";
  std::string out;
  for (const auto &p : products) {
    if (!out.empty())
      out += " + ";
    std::string item;
    bool unit = p.prefactor.is_constant() && p.prefactor.constant_value() == 1;
    if (!unit || p.factors.empty()) {
      std::string s = p.prefactor.to_string();
      item += simple_expr(s) ? s : "(" + s + ")";
    }
    for (const auto &f : p.factors) {
      if (!item.empty())
        item += "*";
      std::string body;
      for (const auto &w : f.derivs) {
        if (!body.empty())
          body += " + ";
        body += "D" + w.to_string();
      }
      if (!f.shift.is_zero()) {
        std::string s = f.shift.to_string();
        body += " + " + (simple_expr(s) ? s : "(" + s + ")");
      }
      item += "(" + body + ")";
      if (f.power != 1)
        item += "^" + std::to_string(f.power);
    }
    out += item;
  }
  return out;
}

FactorTemplate FactorTemplate::map_exprs(const std::function<JetExpr(const JetExpr &)> &fn) const {
  FactorTemplate r = *this;
  for (auto &p : r.products) {
    p.prefactor = fn(p.prefactor);
    for (auto &f : p.factors)
      f.shift = fn(f.shift);
  }
  return r;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
    ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
    --b;
  return std::string(s.substr(a, b - a));
}

struct Signed {
  bool negative = false;
  std::string text;
};

// Splits at depth-0 '+'/'-' that act as binary or leading unary signs.
std::vector<Signed> split_sum(std::string_view s) {
  std::vector<Signed> out;
  int depth = 0;
  Signed cur;
  bool expect_operand = true;
  for (char c : s) {
    if (c == '(' || c == '[')
      ++depth;
    else if (c == ')' || c == ']')
      --depth;
    if (depth < 0)
      throw ParseError("unbalanced brackets in template \"" + std::string(s) + "\"");
    if (depth == 0 && (c == '+' || c == '-')) {
      if (expect_operand) {
        // unary sign before the first operand, or after '*', '/', '^'
        if (trim(cur.text).empty()) {
          if (c == '-')
            cur.negative = !cur.negative;
          continue;
        }
        cur.text += c;
        continue;
      }
      out.push_back(cur);
      cur = Signed{c == '-', {}};
      expect_operand = true;
      continue;
    }
    cur.text += c;
    if (!std::isspace(static_cast<unsigned char>(c)))
      expect_operand = (depth == 0 && (c == '*' || c == '/' || c == '^'));
  }
  if (depth != 0)
    throw ParseError("unbalanced brackets in template \"" + std::string(s) + "\"");
  if (trim(cur.text).empty())
    throw ParseError("empty summand in template \"" + std::string(s) + "\"");
  out.push_back(cur);
  for (const auto &p : out)
    if (trim(p.text).empty())
      throw ParseError("empty summand in template \"" + std::string(s) + "\"");
  return out;
}

std::vector<std::string> split_product(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '[')
      ++depth;
    else if (c == ')' || c == ']')
      --depth;
    if (depth == 0 && c == '*') {
      out.push_back(trim(cur));
      cur.clear();
      continue;
    }
    cur += c;
  }
  out.push_back(trim(cur));
  for (const auto &p : out)
    if (p.empty())
      throw ParseError("empty factor in template product \"" + std::string(s) + "\"");
  return out;
}

bool is_derivative_piece(const std::string &t) {
  return t.size() >= 3 && t[0] == 'D' && t[1] == '[' && t.back() == ']';
}

} // namespace

FactorTemplate parse_template(std::string_view text, std::size_t dim) {
  FactorTemplate tpl;
  tpl.dim = dim;
  if (trim(text).empty() || trim(text) == "0")
    return tpl;
  for (const auto &summand : split_sum(text)) {
    FactorProduct prod;
    if (summand.negative)
      prod.prefactor = JetExpr(-1);
    for (const auto &item : split_product(summand.text)) {
      // (body) or (body)^k with a derivative piece inside makes a factor
      if (item[0] == '(') {
        int depth = 0;
        std::size_t close = std::string::npos;
        for (std::size_t i = 0; i < item.size(); ++i) {
          if (item[i] == '(')
            ++depth;
          else if (item[i] == ')' && --depth == 0) {
            close = i;
            break;
          }
        }
        if (close == std::string::npos)
          throw ParseError("unbalanced parentheses in \"" + item + "\"");
        std::string rest = trim(std::string_view(item).substr(close + 1));
        unsigned power = 1;
        bool group = rest.empty();
        if (!rest.empty() && rest[0] == '^') {
          std::string k = trim(std::string_view(rest).substr(1));
          group = !k.empty() && std::all_of(k.begin(), k.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c));
          });
          if (group)
            power = static_cast<unsigned>(std::stoul(k));
        }
        std::string body = item.substr(1, close - 1);
        if (group && body.find("D[") != std::string::npos) {
          Factor f;
          f.power = power;
          std::string shift;
          for (const auto &piece : split_sum(body)) {
            std::string t = trim(piece.text);
            if (is_derivative_piece(t)) {
              if (piece.negative)
                throw ParseError("derivative monomials in a factor must have coefficient +1: \"" +
                                 item + "\"");
              MultiIndex w = parse_multi_index(t.substr(1));
              if (w.dim() != dim)
                throw ParseError("derivative " + t + " has wrong dimension");
              f.derivs.push_back(w);
            } else {
              shift += piece.negative ? " - (" : " + (";
              shift += t + ")";
            }
          }
          if (f.derivs.empty())
            throw ParseError("factor without derivative: \"" + item + "\"");
          if (!shift.empty())
            f.shift = parse_expr(shift, dim);
          prod.factors.push_back(std::move(f));
          continue;
        }
      }
      if (!prod.factors.empty())
        throw ParseError("scalar prefactors must precede the factors: \"" + item + "\"");
      prod.prefactor = prod.prefactor * parse_expr(item, dim);
    }
    tpl.products.push_back(std::move(prod));
  }
  return tpl;
}

} // namespace lapinv

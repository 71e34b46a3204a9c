#include "lapinv/classify.hpp"

#include <algorithm>
#include <functional>

namespace lapinv {

// ----------------------------------------------------------------- spec

namespace {

void check_coefficient(const MaximalTerm &t) {
  const JetExpr &c = t.coefficient;
  if (c.is_zero())
    throw SpecError("maximal term " + t.vector.to_string() + " has zero coefficient");
  if (c.is_constant())
    return;
  const auto &p = c.num();
  bool single = c.is_polynomial() && p.is_monomial() && p.terms()[0].second == 1 &&
                p.terms()[0].first.factors().size() == 1 &&
                p.terms()[0].first.factors()[0].second == 1;
  if (single) {
    const JetVariable &jv = var_info(p.terms()[0].first.factors()[0].first);
    if (jv.deriv.is_zero()) {
      if (jv.base.is_parameter())
        return;
      if (jv.base.is_coefficient() && jv.base.owner == t.vector)
        return;
    }
  }
  throw SpecError("maximal coefficient for " + t.vector.to_string() +
                  " must be a nonzero rational, a parameter name, or a" + t.vector.to_string() +
                  "; got " + c.to_string());
}

} // namespace

ClassSpec::ClassSpec(std::size_t dim, std::vector<MaximalTerm> terms)
    : dim_(dim), terms_(std::move(terms)) {
  if (dim_ == 0)
    throw SpecError("dimension must be positive");
  if (terms_.empty())
    throw SpecError("at least one maximal term is required");
  for (const auto &t : terms_) {
    if (t.vector.dim() != dim_)
      throw SpecError("maximal vector " + t.vector.to_string() + " does not have dimension " +
                      std::to_string(dim_));
    check_coefficient(t);
  }
  for (std::size_t i = 0; i < terms_.size(); ++i)
    for (std::size_t j = 0; j < terms_.size(); ++j) {
      if (i == j)
        continue;
      if (terms_[i].vector == terms_[j].vector)
        throw SpecError("duplicate maximal vector " + terms_[i].vector.to_string());
      if (below(terms_[i].vector, terms_[j].vector))
        throw SpecError("maximal vectors must form an antichain: " +
                        terms_[i].vector.to_string() + " is below " +
                        terms_[j].vector.to_string());
    }
  std::sort(terms_.begin(), terms_.end(), [](const MaximalTerm &a, const MaximalTerm &b) {
    return CanonicalLess{}(a.vector, b.vector);
  });
  std::vector<MultiIndex> vs;
  for (const auto &t : terms_)
    vs.push_back(t.vector);
  support_ = down_set(vs);
}

bool ClassSpec::is_maximal(const MultiIndex &v) const {
  for (const auto &t : terms_)
    if (t.vector == v)
      return true;
  return false;
}

JetExpr ClassSpec::coefficient_of(const MultiIndex &v) const {
  for (const auto &t : terms_)
    if (t.vector == v)
      return t.coefficient;
  return coeff(v);
}

DiffOperator ClassSpec::generic_operator() const {
  DiffOperator L(dim_);
  for (const auto &v : support_)
    L.add_term(v, coefficient_of(v));
  return L;
}

// ------------------------------------------------------------- analysis

std::vector<JetExpr> phi(const ClassAnalysis &a, const MultiIndex &v) {
  if (!a.is_submaximal(v))
    throw std::invalid_argument("phi: " + v.to_string() + " is not submaximal");
  std::vector<JetExpr> row(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    MultiIndex up = v.plus_unit(i);
    if (a.maximal.count(up))
      row[i] = JetExpr(v[i] + 1L) * a.spec.coefficient_of(up);
  }
  return row;
}

std::string phi_to_string(const std::vector<JetExpr> &row) {
  std::string s = "(";
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i)
      s += ",";
    s += row[i].to_string();
  }
  return s + ")";
}

std::size_t symbolic_rank(const std::vector<std::vector<JetExpr>> &rows) {
  if (rows.empty())
    return 0;
  const std::size_t r = rows.size(), c = rows[0].size();
  // clear denominators row by row; scaling a row keeps the rank
  std::vector<std::vector<Polynomial>> m(r, std::vector<Polynomial>(c));
  for (std::size_t i = 0; i < r; ++i) {
    Polynomial scale(1);
    for (const auto &e : rows[i])
      if (!e.is_polynomial())
        scale = scale * e.den();
    for (std::size_t j = 0; j < c; ++j) {
      const JetExpr &e = rows[i][j];
      if (e.is_zero())
        continue;
      auto q = scale.divide_exact(e.den());
      m[i][j] = e.num() * *q;
    }
  }
  Polynomial prev(1);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < c && rank < r; ++col) {
    std::size_t p = rank;
    while (p < r && m[p][col].is_zero())
      ++p;
    if (p == r)
      continue;
    std::swap(m[p], m[rank]);
    for (std::size_t i = rank + 1; i < r; ++i) {
      for (std::size_t j = col + 1; j < c; ++j) {
        Polynomial t = m[rank][col] * m[i][j] - m[i][col] * m[rank][j];
        auto q = t.divide_exact(prev);
        if (!q)
          throw std::logic_error("fraction-free elimination: inexact division");
        m[i][j] = std::move(*q);
      }
      m[i][col] = Polynomial();
    }
    prev = m[rank][col];
    ++rank;
  }
  return rank;
}

namespace {

// Index i <-> submaximal s with s + e_i maximal; Kuhn's augmenting paths.
std::optional<std::vector<MultiIndex>> flat_matching(const ClassAnalysis &a) {
  const std::size_t n = a.dim();
  std::vector<MultiIndex> subs(a.submaximal.begin(), a.submaximal.end());
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < subs.size(); ++k)
      if (a.maximal.count(subs[k].plus_unit(i)))
        adj[i].push_back(k);
  std::vector<int> owner(subs.size(), -1);
  std::function<bool(std::size_t, std::vector<bool> &)> augment =
      [&](std::size_t i, std::vector<bool> &seen) {
        for (std::size_t k : adj[i]) {
          if (seen[k])
            continue;
          seen[k] = true;
          if (owner[k] < 0 || augment(static_cast<std::size_t>(owner[k]), seen)) {
            owner[k] = static_cast<int>(i);
            return true;
          }
        }
        return false;
      };
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<bool> seen(subs.size(), false);
    if (!augment(i, seen))
      return std::nullopt;
  }
  std::vector<MultiIndex> witness(n);
  for (std::size_t k = 0; k < subs.size(); ++k)
    if (owner[k] >= 0)
      witness[static_cast<std::size_t>(owner[k])] = subs[k];
  return witness;
}

// 0: single nonzero constant entry, 1: single nonzero entry, 2: general.
int phi_preference(const std::vector<JetExpr> &row) {
  int nonzero = 0;
  bool constant = true;
  for (const auto &e : row)
    if (!e.is_zero()) {
      ++nonzero;
      constant = constant && e.is_constant();
    }
  if (nonzero == 1)
    return constant ? 0 : 1;
  return 2;
}

std::string set_to_string(const IndexSet &s) {
  std::string out = "{";
  for (const auto &v : s) {
    if (out.size() > 1)
      out += ",";
    out += v.to_string();
  }
  return out + "}";
}

} // namespace

ClassAnalysis analyze(const ClassSpec &spec) {
  ClassAnalysis a;
  a.spec = spec;
  a.all_vectors = spec.support();
  const std::size_t n = spec.dim();
  for (const auto &t : spec.maximal_terms())
    a.maximal.insert(t.vector);
  for (const auto &v : a.all_vectors) {
    if (a.maximal.count(v))
      continue;
    bool covered = false, only_maximal = true;
    for (std::size_t i = 0; i < n; ++i) {
      MultiIndex up = v.plus_unit(i);
      if (!a.all_vectors.count(up))
        continue;
      covered = true;
      if (!a.maximal.count(up))
        only_maximal = false;
    }
    if (covered && only_maximal)
      a.submaximal.insert(v);
    else
      a.interior.insert(v);
  }
  for (const auto &s : a.submaximal)
    a.phi_vectors.emplace(s, phi(a, s));

  if (auto w = flat_matching(a)) {
    a.approximately_flat = true;
    a.flat_witness = std::move(*w);
  } else {
    a.diagnostics.push_back("not approximately flat: submaximal set " + set_to_string(a.submaximal) +
                            " has no " + std::to_string(n) +
                            " distinct elements s_i with s_i + e_i maximal");
  }

  // Greedy framing set: rows with one nonzero constant entry first, then one
  // nonzero entry, then the rest; canonical order inside each group.
  std::vector<std::vector<JetExpr>> rows;
  for (int pref = 0; pref <= 2 && a.framing_set.size() < n; ++pref) {
    for (const auto &[s, row] : a.phi_vectors) {
      if (a.framing_set.size() == n)
        break;
      if (phi_preference(row) != pref)
        continue;
      rows.push_back(row);
      if (symbolic_rank(rows) == rows.size())
        a.framing_set.push_back(s);
      else
        rows.pop_back();
    }
  }
  a.phi_rank = a.framing_set.size();
  a.framed = (a.phi_rank == n);
  if (!a.framed) {
    std::string msg = "not framed: phi-vectors of the submaximal terms span rank " +
                      std::to_string(a.phi_rank) + " < " + std::to_string(n);
    std::map<std::string, std::vector<MultiIndex>> groups;
    for (const auto &[s, row] : a.phi_vectors)
      groups[phi_to_string(row)].push_back(s);
    for (const auto &[text, vs] : groups) {
      if (vs.size() < 2)
        continue;
      msg += "; duplicate phi-vector " + text + " for";
      for (const auto &v : vs)
        msg += " " + v.to_string();
    }
    a.framing_set.clear();
    a.diagnostics.push_back(msg);
  }
  return a;
}

} // namespace lapinv

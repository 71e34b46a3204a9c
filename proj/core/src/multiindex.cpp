#include "lapinv/multiindex.hpp"

#include <algorithm>
#include <numeric>

namespace lapinv {

MultiIndex::MultiIndex(std::initializer_list<int> entries)
    : MultiIndex(std::vector<int>(entries)) {}

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_)
    if (e < 0)
      throw std::invalid_argument("multi-index entries must be nonnegative");
}

MultiIndex MultiIndex::unit(std::size_t dim, std::size_t i) {
  if (i >= dim)
    throw DimensionError("unit vector index out of range");
  MultiIndex e(dim);
  e.entries_[i] = 1;
  return e;
}

int MultiIndex::order() const {
  return std::accumulate(entries_.begin(), entries_.end(), 0);
}

bool MultiIndex::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](int e) { return e == 0; });
}

MultiIndex MultiIndex::operator+(const MultiIndex &o) const {
  require_same_dim(*this, o);
  MultiIndex r = *this;
  for (std::size_t i = 0; i < dim(); ++i)
    r.entries_[i] += o.entries_[i];
  return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex &o) const {
  require_same_dim(*this, o);
  MultiIndex r = *this;
  for (std::size_t i = 0; i < dim(); ++i) {
    r.entries_[i] -= o.entries_[i];
    if (r.entries_[i] < 0)
      throw std::domain_error("multi-index difference is negative");
  }
  return r;
}

MultiIndex MultiIndex::plus_unit(std::size_t i) const {
  if (i >= dim())
    throw DimensionError("variable index out of range");
  MultiIndex r = *this;
  ++r.entries_[i];
  return r;
}

MultiIndex MultiIndex::minus_unit(std::size_t i) const {
  if (i >= dim())
    throw DimensionError("variable index out of range");
  if (entries_[i] == 0)
    throw std::domain_error("multi-index difference is negative");
  MultiIndex r = *this;
  --r.entries_[i];
  return r;
}

std::string MultiIndex::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i)
      s += ',';
    s += std::to_string(entries_[i]);
  }
  return s + "]";
}

std::string MultiIndex::compact() const {
  bool digits = std::all_of(entries_.begin(), entries_.end(), [](int e) { return e < 10; });
  std::string s;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!digits && i)
      s += ',';
    s += std::to_string(entries_[i]);
  }
  return s;
}

void require_same_dim(const MultiIndex &a, const MultiIndex &b) {
  if (a.dim() != b.dim())
    throw DimensionError("dimension mismatch: " + a.to_string() + " vs " + b.to_string());
}

bool CanonicalLess::operator()(const MultiIndex &a, const MultiIndex &b) const {
  int oa = a.order(), ob = b.order();
  if (oa != ob)
    return oa > ob;
  return a > b;
}

bool below_or_equal(const MultiIndex &u, const MultiIndex &v) {
  require_same_dim(u, v);
  for (std::size_t i = 0; i < u.dim(); ++i)
    if (u[i] > v[i])
      return false;
  return true;
}

bool below(const MultiIndex &u, const MultiIndex &v) { return below_or_equal(u, v) && u != v; }

bool covers(const MultiIndex &v, const MultiIndex &u) {
  require_same_dim(u, v);
  int diff = 0;
  for (std::size_t i = 0; i < u.dim(); ++i) {
    int d = v[i] - u[i];
    if (d < 0 || d > 1)
      return false;
    diff += d;
  }
  return diff == 1;
}

IndexSet down_set(const IndexSet &vs) {
  if (vs.empty())
    throw std::invalid_argument("down set of an empty set");
  const std::size_t n = vs.begin()->dim();
  IndexSet out;
  for (const auto &v : vs) {
    if (v.dim() != n)
      throw DimensionError("down set: mixed dimensions");
    // enumerate the box 0 <= u <= v
    MultiIndex u(n);
    while (true) {
      out.insert(u);
      std::size_t i = 0;
      while (i < n && u[i] == v[i]) {
        u[i] = 0;
        ++i;
      }
      if (i == n)
        break;
      ++u[i];
    }
  }
  return out;
}

IndexSet down_set(const std::vector<MultiIndex> &vs) {
  return down_set(IndexSet(vs.begin(), vs.end()));
}

mpz_class multi_binomial(const MultiIndex &u, const MultiIndex &b) {
  require_same_dim(u, b);
  mpz_class r = 1;
  for (std::size_t i = 0; i < u.dim(); ++i) {
    if (b[i] > u[i])
      return 0;
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(u[i]), static_cast<unsigned long>(b[i]));
    r *= c;
  }
  return r;
}

std::size_t MultiIndexHash::operator()(const MultiIndex &m) const {
  std::size_t h = m.dim();
  for (int e : m.entries())
    h = h * 1000003u ^ static_cast<std::size_t>(e);
  return h;
}

} // namespace lapinv

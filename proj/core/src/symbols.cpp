#include "lapinv/symbols.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

namespace lapinv {

namespace {

std::strong_ordering canonical_cmp(const MultiIndex &a, const MultiIndex &b) {
  if (a == b)
    return std::strong_ordering::equal;
  return CanonicalLess{}(a, b) ? std::strong_ordering::less : std::strong_ordering::greater;
}

} // namespace

std::strong_ordering BaseSymbol::operator<=>(const BaseSymbol &o) const {
  if (auto c = kind <=> o.kind; c != 0)
    return c;
  if (auto c = canonical_cmp(owner, o.owner); c != 0)
    return c;
  if (auto c = name <=> o.name; c != 0)
    return c;
  return dim <=> o.dim;
}

std::string BaseSymbol::to_string() const {
  switch (kind) {
  case SymbolKind::Coefficient:
    return "a" + owner.to_string();
  case SymbolKind::Gauge:
    return "g";
  case SymbolKind::Parameter:
    return name;
  }
  return {};
}

std::strong_ordering JetVariable::operator<=>(const JetVariable &o) const {
  if (auto c = base <=> o.base; c != 0)
    return c;
  if (deriv == o.deriv)
    return std::strong_ordering::equal;
  // lower derivative order first
  int oa = deriv.order(), ob = o.deriv.order();
  if (oa != ob)
    return oa <=> ob;
  return o.deriv <=> deriv;
}

std::string JetVariable::to_string() const {
  std::string s = base.to_string();
  if (!deriv.is_zero())
    s += ";" + deriv.to_string();
  return s;
}

struct VarTable::Impl {
  mutable std::shared_mutex mutex;
  std::deque<JetVariable> vars;
  std::deque<std::vector<VarId>> derived;  // lazily filled, kNone when unknown
  std::unordered_map<std::string, VarId> index;

  static constexpr VarId kNone = ~VarId{0};

  static std::string key(const JetVariable &v) {
    std::string k;
    k += static_cast<char>('0' + static_cast<int>(v.base.kind));
    k += v.base.owner.to_string();
    k += '|';
    k += v.base.name;
    k += '|';
    k += std::to_string(v.base.dim);
    k += v.deriv.to_string();
    return k;
  }
};

VarTable &VarTable::instance() {
  static VarTable table;
  return table;
}

VarTable::Impl &VarTable::impl() const {
  static Impl state;
  return state;
}

VarId VarTable::intern(const JetVariable &v) {
  if (v.deriv.dim() != v.base.dim)
    throw DimensionError("jet variable " + v.to_string() + ": derivative has wrong dimension");
  auto &s = impl();
  const std::string k = Impl::key(v);
  {
    std::shared_lock lock(s.mutex);
    if (auto it = s.index.find(k); it != s.index.end())
      return it->second;
  }
  std::unique_lock lock(s.mutex);
  if (auto it = s.index.find(k); it != s.index.end())
    return it->second;
  VarId id = static_cast<VarId>(s.vars.size());
  s.vars.push_back(v);
  s.derived.emplace_back(v.base.dim, Impl::kNone);
  s.index.emplace(k, id);
  return id;
}

const JetVariable &VarTable::get(VarId id) const {
  auto &s = impl();
  std::shared_lock lock(s.mutex);
  return s.vars.at(id);
}

VarId VarTable::derive(VarId id, std::size_t i) {
  auto &s = impl();
  JetVariable v;
  {
    std::shared_lock lock(s.mutex);
    const auto &cache = s.derived.at(id);
    if (i >= cache.size())
      throw DimensionError("derivative index out of range for " + s.vars[id].to_string());
    if (cache[i] != Impl::kNone)
      return cache[i];
    v = s.vars[id];
  }
  v.deriv = v.deriv.plus_unit(i);
  VarId d = intern(v);
  std::unique_lock lock(s.mutex);
  s.derived[id][i] = d;
  return d;
}

bool VarTable::less(VarId a, VarId b) const {
  if (a == b)
    return false;
  return get(a) < get(b);
}

} // namespace lapinv

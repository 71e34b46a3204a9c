#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "lapinv/multiindex.hpp"

namespace lapinv {

enum class SymbolKind : std::uint8_t { Coefficient = 0, Gauge = 1, Parameter = 2 };

/// Base of a jet variable: an operator coefficient a_v, the gauge function g,
/// or a named parameter (template parameters, symbolic maximal coefficients).
struct BaseSymbol {
  SymbolKind kind = SymbolKind::Parameter;
  MultiIndex owner;  // Coefficient only
  std::string name;  // Parameter only
  std::size_t dim = 0;

  static BaseSymbol coefficient(const MultiIndex &v) {
    return {SymbolKind::Coefficient, v, {}, v.dim()};
  }
  static BaseSymbol gauge(std::size_t dim) { return {SymbolKind::Gauge, {}, {}, dim}; }
  static BaseSymbol parameter(std::string name, std::size_t dim) {
    return {SymbolKind::Parameter, {}, std::move(name), dim};
  }

  bool is_coefficient() const { return kind == SymbolKind::Coefficient; }
  bool is_gauge() const { return kind == SymbolKind::Gauge; }
  bool is_parameter() const { return kind == SymbolKind::Parameter; }

  bool operator==(const BaseSymbol &o) const {
    return kind == o.kind && owner == o.owner && name == o.name && dim == o.dim;
  }
  /// Coefficient < Gauge < Parameter, then owner (canonical multi-index
  /// order) or name.
  std::strong_ordering operator<=>(const BaseSymbol &o) const;

  /// Grammar spelling without derivative suffix: "a[2,0]", "g", "p".
  std::string to_string() const;
};

struct JetVariable {
  BaseSymbol base;
  MultiIndex deriv;

  bool operator==(const JetVariable &) const = default;
  /// Base symbol first, then derivative multi-index (lower order first).
  std::strong_ordering operator<=>(const JetVariable &o) const;

  /// "a[2,0];[1,0]"
  std::string to_string() const;
};

using VarId = std::uint32_t;

/// Process-wide interning table for jet variables. Thread-safe; entries are
/// never removed, so a VarId stays valid for the process lifetime.
class VarTable {
public:
  static VarTable &instance();

  VarId intern(const JetVariable &v);
  const JetVariable &get(VarId id) const;
  /// Id of the variable with deriv + e_i.
  VarId derive(VarId id, std::size_t i);
  /// Canonical total order on variables.
  bool less(VarId a, VarId b) const;

private:
  VarTable() = default;
  struct Impl;
  Impl &impl() const;
};

inline VarId intern(const JetVariable &v) { return VarTable::instance().intern(v); }
inline const JetVariable &var_info(VarId id) { return VarTable::instance().get(id); }

} // namespace lapinv

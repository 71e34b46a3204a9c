#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "lapinv/classify.hpp"

namespace lapinv {

struct UnknownSymbolError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// Gauged generic operator of a class together with a -> a' substitution.
class DeltaContext {
public:
  explicit DeltaContext(const ClassSpec &spec);

  const ClassSpec &spec() const { return spec_; }
  const DiffOperator &gauged() const { return gauged_; }
  /// a'_v; equals the given coefficient for maximal v.
  JetExpr primed(const MultiIndex &v) const;

  /// Throws UnknownSymbolError for the gauge symbol, coefficients outside the
  /// support, and parameters that are not maximal coefficients.
  void check_symbols(const JetExpr &e) const;
  /// E evaluated on the gauged coefficients.
  JetExpr apply(const JetExpr &e) const;
  /// Delta E = E' - E.
  JetExpr delta(const JetExpr &e) const;

private:
  ClassSpec spec_;
  DiffOperator gauged_;
  std::map<MultiIndex, JetExpr, CanonicalLess> primed_;
};

struct InvarianceResult {
  bool invariant = false;
  JetExpr residual;
};

InvarianceResult is_invariant(const JetExpr &e, const DeltaContext &ctx);

/// Instantiates coefficients and g as random polynomials (total degree <= 3,
/// coefficients p/q with |p|, q <= 7) and compares E before and after the
/// gauge action at random rational points, in exact arithmetic. Points where
/// a denominator or an assumption vanishes are resampled.
bool numeric_spot_check(const JetExpr &e, const DeltaContext &ctx, std::uint64_t seed,
                        const std::vector<JetExpr> &assumptions = {});

} // namespace lapinv

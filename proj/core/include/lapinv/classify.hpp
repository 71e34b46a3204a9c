#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lapinv/opalg.hpp"

namespace lapinv {

struct SpecError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct MaximalTerm {
  MultiIndex vector;
  /// Nonzero rational literal, an underived parameter, or a[vector].
  JetExpr coefficient;
};

/// A maximally generated class: dimension plus an antichain of maximal terms.
class ClassSpec {
public:
  ClassSpec() = default;
  /// Validates dimension, antichain property and coefficient shape; throws
  /// SpecError.
  ClassSpec(std::size_t dim, std::vector<MaximalTerm> terms);

  std::size_t dim() const { return dim_; }
  const std::vector<MaximalTerm> &maximal_terms() const { return terms_; }
  const IndexSet &support() const { return support_; }
  bool is_maximal(const MultiIndex &v) const;

  /// Given coefficient for maximal v, the symbol a_v otherwise.
  JetExpr coefficient_of(const MultiIndex &v) const;
  /// sum over the support of coefficient_of(v) d^v.
  DiffOperator generic_operator() const;

private:
  std::size_t dim_ = 0;
  std::vector<MaximalTerm> terms_;
  IndexSet support_;
};

struct ClassAnalysis {
  ClassSpec spec;
  IndexSet all_vectors;
  IndexSet maximal;
  IndexSet submaximal;
  IndexSet interior;

  bool approximately_flat = false;
  /// s_i with s_i + e_i maximal, when approximately flat.
  std::vector<MultiIndex> flat_witness;

  bool framed = false;
  std::size_t phi_rank = 0;
  /// Framing set in selection order, when framed.
  std::vector<MultiIndex> framing_set;
  std::map<MultiIndex, std::vector<JetExpr>, CanonicalLess> phi_vectors;

  /// Human-readable reasons for failed hypotheses.
  std::vector<std::string> diagnostics;

  std::size_t dim() const { return spec.dim(); }
  bool is_submaximal(const MultiIndex &v) const { return submaximal.count(v) > 0; }
  bool is_interior(const MultiIndex &v) const { return interior.count(v) > 0; }
};

ClassAnalysis analyze(const ClassSpec &spec);

/// phi(v) = sum over i with v + e_i maximal of (v(i)+1) a_{v+e_i} e_i.
/// Throws std::invalid_argument when v is not submaximal.
std::vector<JetExpr> phi(const ClassAnalysis &analysis, const MultiIndex &v);

/// Rank over the fraction field, by fraction-free (Bareiss) elimination.
std::size_t symbolic_rank(const std::vector<std::vector<JetExpr>> &rows);

std::string phi_to_string(const std::vector<JetExpr> &row);

} // namespace lapinv

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lapinv/classify.hpp"

namespace lapinv {

enum class InvariantKind { Maximal, Extra, Compatibility, Upward };

std::string to_string(InvariantKind k);

/// Incomplete factorization L = C + N documenting how an invariant arose.
struct Representation {
  std::string template_text;
  /// Parameter bindings in solve order.
  std::vector<std::pair<std::string, JetExpr>> bindings;
};

struct InvariantRecord {
  InvariantKind kind = InvariantKind::Maximal;
  std::string label;
  std::optional<MultiIndex> target;
  JetExpr expression;
  /// Expressions assumed nonzero (divisions performed during construction).
  std::vector<JetExpr> assumptions;
  std::optional<Representation> representation;
};

/// Class fails the framed or approximately-flat hypothesis.
struct HypothesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A template stage cannot be solved uniquely, or fails its closure check.
struct TemplateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// "x", "y", "z" for n <= 3, otherwise "x1", "x2", ...
std::string variable_name(std::size_t i, std::size_t n);

/// Normal form of a nonvanishing assumption: integer-primitive numerator,
/// positive constant term (or leading coefficient). Monomial factors are
/// split off as separate assumptions; constants are dropped.
std::vector<JetExpr> assumption_factors(const JetExpr &e);
void add_assumptions(std::vector<JetExpr> &into, const std::vector<JetExpr> &more);

std::vector<InvariantRecord> maximal_invariants(const ClassSpec &spec);

struct GradientSolution {
  /// Framing vectors v_1..v_n, in selection order.
  std::vector<MultiIndex> framing;
  /// pivot[k]: index i of the derivative g_{x_i} solved from row k.
  std::vector<std::size_t> pivot;
  /// gradient[i] = G_i, linear in the a_{v_k}, with Delta G_i = g_{x_i}.
  std::vector<JetExpr> gradient;
  /// Submaximal vectors outside the framing set.
  std::vector<MultiIndex> residual;
  std::vector<JetExpr> assumptions;
};

GradientSolution solve_gradient(const ClassAnalysis &analysis);
std::vector<InvariantRecord> extra_invariants(const ClassAnalysis &analysis,
                                              const GradientSolution &sol);
std::vector<InvariantRecord> compatibility_invariants(const ClassAnalysis &analysis,
                                                      const GradientSolution &sol);

/// Sum of F_m over maximal m, with c_i and p_v solved.
struct CmConstruction {
  FactorTemplate symbolic;
  Bindings bindings;
  std::vector<std::pair<std::string, JetExpr>> solve_order;
  std::vector<JetExpr> assumptions;
  /// L - C with all parameters substituted.
  DiffOperator remainder;
};

CmConstruction build_Cm(const ClassAnalysis &analysis);

/// Upward invariant for an interior vector via C_m plus B_w for w above v.
InvariantRecord upward_invariant_generic(const ClassAnalysis &analysis, const MultiIndex &v);

struct TemplateStage {
  std::string template_text;
  /// Parameters to solve for; inferred from the template when empty.
  std::vector<std::string> parameters;
  /// Coefficients of L - C to zero, besides the maximal ones.
  std::vector<MultiIndex> targets;
  bool check_closure = false;
};

/// Runs each stage independently: solves the stage's parameters
/// triangularly so the maximal and target coefficients of L - C vanish, and
/// returns the coefficients of L - C at the maximal vectors of what remains.
std::vector<InvariantRecord> upward_invariants_from_template(const ClassAnalysis &analysis,
                                                             const std::vector<TemplateStage> &stages);

/// True when gauging the expanded template lands back in its parameter
/// family. `parameters` empty means inferred.
bool template_closed_under_gauge(const ClassSpec &spec, const FactorTemplate &tpl,
                                 const std::vector<std::string> &parameters = {});

/// Bottom upward invariant of the class generated by d_{x_1...x_n}, from
/// I_00 = a_00 - (a_10 a_01 + a_10;x1) by the recursion C = (d_z + p) L_n.
InvariantRecord recursive_hyperbolic_bottom(int n);

/// expr = a_v - E with E built only from coefficients strictly above v,
/// maximal or submaximal coefficients, and maximal parameters.
bool is_structurally_upward(const JetExpr &expr, const MultiIndex &v,
                            const ClassAnalysis &analysis);

struct CompletenessAudit {
  std::size_t maximal_expected = 0, maximal_found = 0;
  std::size_t extra_expected = 0, extra_found = 0;
  std::size_t compatibility_expected = 0, compatibility_found = 0;
  std::size_t upward_expected = 0, upward_found = 0;
  std::vector<MultiIndex> missing_upward;
  bool complete() const {
    return maximal_found == maximal_expected && extra_found == extra_expected &&
           compatibility_found == compatibility_expected && upward_found == upward_expected;
  }
};

struct CompleteSet {
  ClassAnalysis analysis;
  std::vector<InvariantRecord> records;
  CompletenessAudit audit;
};

/// Maximal, extra, compatibility and one upward invariant per interior
/// vector. Template stages are tried first; interior vectors they do not
/// cover get the generic construction. Throws HypothesisError when the class
/// is not framed or not approximately flat.
CompleteSet complete_set(const ClassSpec &spec, const std::vector<TemplateStage> &templates = {});

CompletenessAudit audit(const ClassAnalysis &analysis, const std::vector<InvariantRecord> &records);

/// (I1 + alpha I2)/(1 - alpha beta) and (I2 + beta I1)/(1 - alpha beta),
/// which decouple a pair of invariants I1 = a_u - alpha a_w - ...,
/// I2 = a_w - beta a_u - ....
std::pair<InvariantRecord, InvariantRecord>
decouple_pair(const InvariantRecord &first, const InvariantRecord &second, const JetExpr &alpha,
              const JetExpr &beta);

/// I000 + Icxz - (1/3)(Icxz)_y - (1/3)(Icyz)_x - I100 - I010 - I001 - 1 for
/// the class generated by d_xyz.
JetExpr symmetric_hyperbolic_recipe(const JetExpr &i000, const JetExpr &icxz,
                                    const JetExpr &icyz, const JetExpr &i100,
                                    const JetExpr &i010, const JetExpr &i001);

} // namespace lapinv

#pragma once

#include <string>
#include <vector>

#include "lapinv/invariants.hpp"
#include "lapinv/io.hpp"
#include "lapinv/parser.hpp"
#include "lapinv/verify.hpp"

#ifndef LAPINV_FIXTURE_DIR
#error "LAPINV_FIXTURE_DIR must be defined"
#endif

namespace support {

using namespace lapinv;

inline JetExpr E(const std::string &text, std::size_t n) { return parse_expr(text, n); }

inline std::string fixture(const std::string &name) {
  return std::string(LAPINV_FIXTURE_DIR) + "/" + name + ".json";
}

inline ClassSpec load_spec(const std::string &name) {
  return spec_from_json(read_json_file(fixture(name)));
}

inline std::vector<TemplateStage> load_templates(const std::string &name, std::size_t dim) {
  return templates_from_json(read_json_file(fixture(name)), dim);
}

/// Fixture classes satisfying both hypotheses.
inline const std::vector<std::string> &good_fixtures() {
  static const std::vector<std::string> names{"classical_xy", "xxy", "xxy_xyy", "xxxyy",
                                              "x3",           "xyz", "order5_3d"};
  return names;
}

inline const std::vector<std::string> &all_fixtures() {
  static const std::vector<std::string> names{
      "classical_xy", "xxy",           "xxy_xyy",        "xxxyy",     "x3",
      "xyz",          "order5_3d",     "not_flat_xx_y", "not_flat_xz_yz", "not_framed"};
  return names;
}

inline const InvariantRecord *find_label(const std::vector<InvariantRecord> &recs,
                                         const std::string &label) {
  for (const auto &r : recs)
    if (r.label == label)
      return &r;
  return nullptr;
}

inline const InvariantRecord *find_kind(const std::vector<InvariantRecord> &recs, InvariantKind k,
                                        const MultiIndex &target) {
  for (const auto &r : recs)
    if (r.kind == k && r.target && *r.target == target)
      return &r;
  return nullptr;
}

/// a == c * b for some nonzero rational c.
inline bool equal_up_to_constant(const JetExpr &a, const JetExpr &b) {
  if (a.is_zero() || b.is_zero())
    return a.is_zero() && b.is_zero();
  JetExpr q = a / b;
  return q.is_constant();
}

} // namespace support

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lapinv/invariants.hpp"
#include "lapinv/verify.hpp"

namespace lapinv {

using ordered_json = nlohmann::ordered_json;

/// Malformed input document (wrong JSON shape, unparsable expression).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ordered_json to_json(const MultiIndex &v);
MultiIndex multi_index_from_json(const nlohmann::json &j, std::size_t dim = 0);

/// {"dimension": n, "maximal_terms": [{"vector": [...], "coefficient": "..."}]}
ClassSpec spec_from_json(const nlohmann::json &j);
ordered_json to_json(const ClassSpec &spec);

/// [{"vector": [...], "coeff": "..."}]
DiffOperator operator_from_json(const nlohmann::json &j);
ordered_json to_json(const DiffOperator &op);

ordered_json to_json(const ClassAnalysis &a);
ordered_json to_json(const InvariantRecord &r);
ordered_json to_json(const CompletenessAudit &a);

/// {"stages": [{"template": "...", "targets": [[...]], "parameters": [...],
/// "check_closure": false}]}, or the bare stage array.
std::vector<TemplateStage> templates_from_json(const nlohmann::json &j, std::size_t dim);

struct VerificationReport {
  std::string expression;
  bool invariant = false;
  std::string residual;  // empty when invariant
  bool numeric_check = false;
  std::uint64_t seed = kDefaultSeed;
};

VerificationReport verify_expression(const JetExpr &e, const DeltaContext &ctx, std::uint64_t seed,
                                     const std::vector<JetExpr> &assumptions = {});
ordered_json to_json(const VerificationReport &r);

/// Reads and parses a JSON file; throws InputError.
nlohmann::json read_json_file(const std::string &path);

} // namespace lapinv

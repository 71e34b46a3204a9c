#include "lapinv/io.hpp"

#include <fstream>
#include <sstream>

#include "lapinv/parser.hpp"

namespace lapinv {

using nlohmann::json;

namespace {

const json &field(const json &j, const char *key, const std::string &where) {
  if (!j.is_object() || !j.contains(key))
    throw InputError(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

std::string expr_text(const json &j, const std::string &where) {
  if (j.is_string())
    return j.get<std::string>();
  if (j.is_number_integer())
    return std::to_string(j.get<long long>());
  throw InputError(where + ": expected an expression string");
}

JetExpr parse_field(const json &j, std::size_t dim, const std::string &where) {
  try {
    return parse_expr(expr_text(j, where), dim);
  } catch (const ParseError &e) {
    throw InputError(where + ": " + e.what());
  }
}

} // namespace

ordered_json to_json(const MultiIndex &v) { return ordered_json(v.entries()); }

MultiIndex multi_index_from_json(const json &j, std::size_t dim) {
  if (!j.is_array() || j.empty())
    throw InputError("multi-index must be a nonempty array of integers");
  std::vector<int> e;
  for (const auto &x : j) {
    if (!x.is_number_integer() || x.get<long long>() < 0)
      throw InputError("multi-index entries must be nonnegative integers: " + j.dump());
    e.push_back(x.get<int>());
  }
  if (dim && e.size() != dim)
    throw InputError("multi-index " + j.dump() + " does not have dimension " + std::to_string(dim));
  return MultiIndex(e);
}

ClassSpec spec_from_json(const json &j) {
  const json &d = field(j, "dimension", "class spec");
  if (!d.is_number_integer() || d.get<long long>() <= 0)
    throw InputError("class spec: \"dimension\" must be a positive integer");
  const std::size_t n = d.get<std::size_t>();
  const json &terms = field(j, "maximal_terms", "class spec");
  if (!terms.is_array())
    throw InputError("class spec: \"maximal_terms\" must be an array");
  std::vector<MaximalTerm> ts;
  for (const auto &t : terms) {
    MultiIndex v = multi_index_from_json(field(t, "vector", "maximal term"), n);
    ts.push_back({v, parse_field(field(t, "coefficient", "maximal term"), n,
                                 "coefficient of " + v.to_string())});
  }
  return ClassSpec(n, std::move(ts));
}

ordered_json to_json(const ClassSpec &spec) {
  ordered_json terms = ordered_json::array();
  for (const auto &t : spec.maximal_terms())
    terms.push_back({{"vector", to_json(t.vector)}, {"coefficient", t.coefficient.to_string()}});
  return {{"dimension", spec.dim()}, {"maximal_terms", terms}};
}

DiffOperator operator_from_json(const json &j) {
  if (!j.is_array() || j.empty())
    throw InputError("operator must be a nonempty array of {\"vector\", \"coeff\"} terms");
  const std::size_t n = multi_index_from_json(field(j[0], "vector", "operator term")).dim();
  DiffOperator L(n);
  for (const auto &t : j) {
    MultiIndex v = multi_index_from_json(field(t, "vector", "operator term"), n);
    L.add_term(v, parse_field(field(t, "coeff", "operator term"), n, "coefficient of " + v.to_string()));
  }
  return L;
}

ordered_json to_json(const DiffOperator &op) {
  ordered_json out = ordered_json::array();
  for (const auto &[v, c] : op.terms())
    out.push_back({{"vector", to_json(v)}, {"coeff", c.to_string()}});
  return out;
}

ordered_json to_json(const ClassAnalysis &a) {
  auto vecs = [](const auto &range) {
    ordered_json arr = ordered_json::array();
    for (const auto &v : range)
      arr.push_back(to_json(v));
    return arr;
  };
  ordered_json phis = ordered_json::array();
  for (const auto &[v, row] : a.phi_vectors) {
    ordered_json r = ordered_json::array();
    for (const auto &e : row)
      r.push_back(e.to_string());
    phis.push_back({{"vector", to_json(v)}, {"phi", r}});
  }
  ordered_json out;
  out["dimension"] = a.dim();
  out["support"] = vecs(a.all_vectors);
  out["maximal"] = vecs(a.maximal);
  out["submaximal"] = vecs(a.submaximal);
  out["interior"] = vecs(a.interior);
  out["approximately_flat"] = a.approximately_flat;
  if (a.approximately_flat)
    out["flat_witness"] = vecs(a.flat_witness);
  out["framed"] = a.framed;
  out["phi_rank"] = a.phi_rank;
  if (a.framed)
    out["framing_set"] = vecs(a.framing_set);
  out["phi_vectors"] = phis;
  out["diagnostics"] = a.diagnostics;
  return out;
}

ordered_json to_json(const InvariantRecord &r) {
  ordered_json out;
  out["kind"] = to_string(r.kind);
  out["label"] = r.label;
  if (r.target)
    out["target_vector"] = to_json(*r.target);
  out["expression"] = r.expression.to_string();
  ordered_json as = ordered_json::array();
  for (const auto &a : r.assumptions)
    as.push_back(a.to_string());
  out["assumptions"] = as;
  if (r.representation) {
    ordered_json b = ordered_json::object();
    for (const auto &[name, e] : r.representation->bindings)
      b[name] = e.to_string();
    out["representation"] = {{"template", r.representation->template_text}, {"bindings", b}};
  }
  return out;
}

ordered_json to_json(const CompletenessAudit &a) {
  auto pair = [](std::size_t expected, std::size_t found) {
    return ordered_json{{"expected", expected}, {"found", found}};
  };
  ordered_json missing = ordered_json::array();
  for (const auto &v : a.missing_upward)
    missing.push_back(to_json(v));
  return {{"maximal", pair(a.maximal_expected, a.maximal_found)},
          {"extra", pair(a.extra_expected, a.extra_found)},
          {"compatibility", pair(a.compatibility_expected, a.compatibility_found)},
          {"upward", pair(a.upward_expected, a.upward_found)},
          {"missing_upward", missing},
          {"complete", a.complete()}};
}

std::vector<TemplateStage> templates_from_json(const json &j, std::size_t dim) {
  const json &stages = j.is_array() ? j : field(j, "stages", "template file");
  if (!stages.is_array())
    throw InputError("template file: \"stages\" must be an array");
  std::vector<TemplateStage> out;
  for (const auto &s : stages) {
    TemplateStage st;
    const json &t = field(s, "template", "template stage");
    if (!t.is_string())
      throw InputError("template stage: \"template\" must be a string");
    st.template_text = t.get<std::string>();
    if (s.contains("targets")) {
      if (!s["targets"].is_array())
        throw InputError("template stage: \"targets\" must be an array");
      for (const auto &v : s["targets"])
        st.targets.push_back(multi_index_from_json(v, dim));
    }
    if (s.contains("parameters")) {
      if (!s["parameters"].is_array())
        throw InputError("template stage: \"parameters\" must be an array");
      for (const auto &p : s["parameters"]) {
        if (!p.is_string())
          throw InputError("template stage: parameter names must be strings");
        st.parameters.push_back(p.get<std::string>());
      }
    }
    if (s.contains("check_closure")) {
      if (!s["check_closure"].is_boolean())
        throw InputError("template stage: \"check_closure\" must be a boolean");
      st.check_closure = s["check_closure"].get<bool>();
    }
    out.push_back(std::move(st));
  }
  return out;
}

VerificationReport verify_expression(const JetExpr &e, const DeltaContext &ctx, std::uint64_t seed,
                                     const std::vector<JetExpr> &assumptions) {
  VerificationReport r;
  r.expression = e.to_string();
  r.seed = seed;
  InvarianceResult sym = is_invariant(e, ctx);
  r.invariant = sym.invariant;
  if (!sym.invariant)
    r.residual = sym.residual.to_string();
  try {
    r.numeric_check = numeric_spot_check(e, ctx, seed, assumptions);
  } catch (const std::runtime_error &) {
    r.numeric_check = false;
  }
  return r;
}

ordered_json to_json(const VerificationReport &r) {
  ordered_json out;
  out["expression"] = r.expression;
  out["invariant"] = r.invariant;
  if (!r.invariant)
    out["residual"] = r.residual;
  out["numeric_check"] = r.numeric_check;
  out["seed"] = r.seed;
  return out;
}

json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error &e) {
    throw InputError(path + ": " + e.what());
  }
}

} // namespace lapinv

#include "lapinv/cli.hpp"

#include <CLI11.hpp>

#include "lapinv/io.hpp"
#include "lapinv/latex.hpp"
#include "lapinv/parser.hpp"

namespace lapinv {

namespace {

struct Options {
  std::string input;
  std::string format = "json";
  std::string templates;
  std::string g;
  std::string expr;
  std::vector<std::string> assume;
  bool verify = false;
  std::uint64_t seed = kDefaultSeed;
};

// Failed --verify check; carries the offending label.
struct VerificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void print_json(std::ostream &out, const ordered_json &j) { out << j.dump(2) << "\n"; }

void print_analysis_text(std::ostream &out, const ClassAnalysis &a) {
  auto list = [](const auto &range) {
    std::string s;
    for (const auto &v : range)
      s += (s.empty() ? "" : " ") + v.to_string();
    return s.empty() ? std::string("-") : s;
  };
  out << "dimension: " << a.dim() << "\n";
  out << "maximal: " << list(a.maximal) << "\n";
  out << "submaximal: " << list(a.submaximal) << "\n";
  out << "interior: " << list(a.interior) << "\n";
  out << "approximately flat: " << (a.approximately_flat ? "yes" : "no") << "\n";
  out << "framed: " << (a.framed ? "yes" : "no") << " (rank " << a.phi_rank << ")\n";
  if (a.framed)
    out << "framing set: " << list(a.framing_set) << "\n";
  for (const auto &[v, row] : a.phi_vectors)
    out << "phi" << v.to_string() << " = " << phi_to_string(row) << "\n";
  for (const auto &d : a.diagnostics)
    out << "diagnostic: " << d << "\n";
}

int cmd_analyze(const Options &o, std::ostream &out, std::ostream &err) {
  ClassSpec spec = spec_from_json(read_json_file(o.input));
  ClassAnalysis a = analyze(spec);
  if (o.format == "text")
    print_analysis_text(out, a);
  else
    print_json(out, to_json(a));
  for (const auto &d : a.diagnostics)
    err << d << "\n";
  return a.framed && a.approximately_flat ? kExitOk : kExitHypothesis;
}

int cmd_invariants(const Options &o, std::ostream &out) {
  ClassSpec spec = spec_from_json(read_json_file(o.input));
  std::vector<TemplateStage> stages;
  if (!o.templates.empty())
    stages = templates_from_json(read_json_file(o.templates), spec.dim());
  CompleteSet cs = complete_set(spec, stages);
  std::vector<VerificationReport> reports;
  if (o.verify) {
    DeltaContext ctx(spec);
    for (const auto &r : cs.records) {
      VerificationReport rep = verify_expression(r.expression, ctx, o.seed, r.assumptions);
      if (!rep.invariant || !rep.numeric_check)
        throw VerificationFailure("record " + r.label + " failed verification (symbolic: " +
                                  (rep.invariant ? "ok" : "residual " + rep.residual) +
                                  ", numeric: " + (rep.numeric_check ? "ok" : "failed") + ")");
      reports.push_back(rep);
    }
  }
  if (o.format == "latex") {
    out << latex(cs.records);
  } else if (o.format == "text") {
    for (const auto &r : cs.records) {
      out << to_string(r.kind) << " " << r.label << " = " << r.expression.to_string();
      for (const auto &a : r.assumptions)
        out << "  [" << a.to_string() << " != 0]";
      out << "\n";
    }
    const auto &au = cs.audit;
    out << "audit: maximal " << au.maximal_found << "/" << au.maximal_expected << ", extra "
        << au.extra_found << "/" << au.extra_expected << ", compatibility "
        << au.compatibility_found << "/" << au.compatibility_expected << ", upward "
        << au.upward_found << "/" << au.upward_expected << (au.complete() ? ", complete" : ", INCOMPLETE")
        << "\n";
  } else {
    ordered_json recs = ordered_json::array();
    for (std::size_t i = 0; i < cs.records.size(); ++i) {
      ordered_json j = to_json(cs.records[i]);
      if (o.verify)
        j["verification"] = to_json(reports[i]);
      recs.push_back(j);
    }
    ordered_json doc;
    doc["class"] = to_json(spec);
    doc["invariants"] = recs;
    doc["audit"] = to_json(cs.audit);
    print_json(out, doc);
  }
  return kExitOk;
}

int cmd_gauge(const Options &o, std::ostream &out) {
  DiffOperator L = operator_from_json(read_json_file(o.input));
  JetExpr g;
  try {
    g = parse_expr(o.g, L.dim());
  } catch (const ParseError &e) {
    throw InputError(std::string("--g: ") + e.what());
  }
  DiffOperator G = gauge_by(L, g);
  if (o.format == "text")
    out << G.to_string() << "\n";
  else
    print_json(out, to_json(G));
  return kExitOk;
}

int cmd_verify(const Options &o, std::ostream &out) {
  ClassSpec spec = spec_from_json(read_json_file(o.input));
  JetExpr e;
  std::vector<JetExpr> assumptions;
  try {
    e = parse_expr(o.expr, spec.dim());
    for (const auto &a : o.assume)
      assumptions.push_back(parse_expr(a, spec.dim()));
  } catch (const ParseError &x) {
    throw InputError(std::string("expression: ") + x.what());
  }
  DeltaContext ctx(spec);
  VerificationReport rep = verify_expression(e, ctx, o.seed, assumptions);
  if (o.format == "text")
    out << (rep.invariant ? "invariant" : "not invariant, residual " + rep.residual)
        << "; numeric check " << (rep.numeric_check ? "passed" : "failed") << " (seed " << rep.seed
        << ")\n";
  else
    print_json(out, to_json(rep));
  return rep.invariant && rep.numeric_check ? kExitOk : kExitVerification;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Gauge invariants of maximally generated classes of linear partial differential operators",
               "lapinv"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::string> formats{"json", "latex", "text"};

  auto *analyze_cmd = app.add_subcommand("analyze", "Classify the terms of a class spec");
  analyze_cmd->add_option("spec", o.input, "Class spec JSON file")->required();
  analyze_cmd->add_option("--format", o.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));

  auto *inv_cmd = app.add_subcommand("invariants", "Construct a complete set of invariants");
  inv_cmd->add_option("spec", o.input, "Class spec JSON file")->required();
  inv_cmd->add_option("--templates", o.templates, "Template stages JSON file");
  inv_cmd->add_flag("--verify", o.verify, "Check every record symbolically and numerically");
  inv_cmd->add_option("--seed", o.seed, "Seed for the numeric check");
  inv_cmd->add_option("--format", o.format, "json, latex or text")->check(CLI::IsMember(formats));

  auto *gauge_cmd = app.add_subcommand("gauge", "Apply the gauge action e^{-g} L e^{g}");
  gauge_cmd->add_option("operator", o.input, "Operator JSON file")->required();
  gauge_cmd->add_option("--g", o.g, "Gauge function in the expression grammar")->required();
  gauge_cmd->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));

  auto *verify_cmd = app.add_subcommand("verify", "Decide whether an expression is invariant");
  verify_cmd->add_option("spec", o.input, "Class spec JSON file")->required();
  verify_cmd->add_option("--expr", o.expr, "Expression in the grammar")->required();
  verify_cmd->add_option("--assume", o.assume, "Expression assumed nonzero (repeatable)");
  verify_cmd->add_option("--seed", o.seed, "Seed for the numeric check");
  verify_cmd->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));

  std::vector<std::string> argv_store{"lapinv"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char *> argv;
  for (const auto &a : argv_store)
    argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }

  try {
    if (analyze_cmd->parsed())
      return cmd_analyze(o, out, err);
    if (inv_cmd->parsed())
      return cmd_invariants(o, out);
    if (gauge_cmd->parsed())
      return cmd_gauge(o, out);
    return cmd_verify(o, out);
  } catch (const InputError &e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ParseError &e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const VerificationFailure &e) {
    err << "verification error: " << e.what() << "\n";
    return kExitVerification;
  } catch (const std::exception &e) {
    // SpecError, HypothesisError, TemplateError, UnknownSymbolError, ...
    err << "error: " << e.what() << "\n";
    return kExitHypothesis;
  }
}

} // namespace lapinv

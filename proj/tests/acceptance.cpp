// Acceptance runner: one PASS/FAIL line per criterion, followed by indented
// sub-check lines. Exits nonzero when any criterion fails.

#include <chrono>
#include <functional>
#include <iostream>

#include "properties.hpp"

using namespace lapinv;
using support::E;

namespace {

class Criterion {
public:
  void check(const std::string &what, bool ok, const std::string &detail = {}) {
    lines_.push_back(std::string(ok ? "ok     " : "FAILED ") + what +
                     (detail.empty() ? "" : ": " + detail));
    ok_ = ok_ && ok;
  }
  void note(const std::string &what) { lines_.push_back("note   " + what); }
  bool ok() const { return ok_; }
  const std::vector<std::string> &lines() const { return lines_; }

private:
  bool ok_ = true;
  std::vector<std::string> lines_;
};

bool invariant(const DeltaContext &ctx, const JetExpr &e) { return is_invariant(e, ctx).invariant; }

const InvariantRecord *need(Criterion &c, const std::vector<InvariantRecord> &recs,
                            const std::string &label) {
  const InvariantRecord *r = support::find_label(recs, label);
  if (!r)
    c.check(label + " constructed", false);
  return r;
}

void equal_and_invariant(Criterion &c, const DeltaContext &ctx, const std::string &name,
                         const InvariantRecord *rec, const JetExpr &expected) {
  if (!rec)
    return;
  c.check(name + " equals the expected form", rec->expression == expected,
          rec->expression == expected ? "" : "got " + rec->expression.to_string());
  c.check(name + " is invariant", invariant(ctx, rec->expression));
}

bool has_assumption(const InvariantRecord &r, const JetExpr &a) {
  for (const auto &x : r.assumptions)
    if (x == a)
      return true;
  return false;
}

CompleteSet with_templates(const std::string &spec, const std::string &tpl) {
  ClassSpec s = support::load_spec(spec);
  return complete_set(s, support::load_templates(tpl, s.dim()));
}

// 1
void classical(Criterion &c) {
  CompleteSet cs = with_templates("classical_xy", "classical_xy_templates");
  DeltaContext ctx(cs.analysis.spec);
  JetExpr h = E("a[0,0] - a[1,0]*a[0,1] - a[1,0];[1,0]", 2);
  JetExpr k = E("a[0,0] - a[1,0]*a[0,1] - a[0,1];[0,1]", 2);
  bool got_h = false, got_k = false;
  for (const auto &r : cs.records)
    if (r.kind == InvariantKind::Upward && r.target == MultiIndex{0, 0}) {
      got_h = got_h || r.expression == h;
      got_k = got_k || r.expression == k;
    }
  c.check("template (D_x + b)(D_y + a) gives h = c - ab - a_x", got_h);
  c.check("template (D_y + a)(D_x + b) gives k = c - ab - b_y", got_k);
  c.check("h is invariant", invariant(ctx, h));
  c.check("k is invariant", invariant(ctx, k));
}

// 2
void xxy(Criterion &c) {
  CompleteSet cs = with_templates("xxy", "xxy_templates");
  DeltaContext ctx(cs.analysis.spec);

  JetExpr ic_printed = E("2*a[2,0];[0,1] - a[1,1];[1,0]", 2);
  const InvariantRecord *ic = need(c, cs.records, "I_c(x,y)");
  if (ic) {
    bool same = ic->expression == ic_printed;
    c.check("I_c equals 2 a20y - a11x as printed", same, same ? "" : "constructed I_c = " + ic->expression.to_string());
  }
  InvarianceResult printed = is_invariant(ic_printed, ctx);
  c.check("2 a20y - a11x is invariant", printed.invariant,
          printed.invariant ? "" : "delta = " + printed.residual.to_string());
  c.note("the form with the derivative directions exchanged, 2 a20x - a11y, is invariant: " +
         std::string(invariant(ctx, E("2*a[2,0];[1,0] - a[1,1];[0,1]", 2)) ? "yes" : "no"));

  equal_and_invariant(c, ctx, "I10 = a10 - (a11 a20 + 2 a20x)", need(c, cs.records, "I_{10}"),
                      E("a[1,0] - (a[1,1]*a[2,0] + 2*a[2,0];[1,0])", 2));
  equal_and_invariant(c, ctx, "I01 = a01 - (a11^2/4 + a11x/2)", need(c, cs.records, "I_{01}"),
                      E("a[0,1] - (a[1,1]^2/4 + a[1,1];[1,0]/2)", 2));

  std::string q = "(a[1,1] - 1)/2", r = "a[2,0]";
  std::string s = "(a[0,1] - ((" + q + ")^2 + (" + q + ");[1,0]))";
  std::string t = "(a[1,0] - (2*(" + q + ")*" + r + " + 2*" + r + ";[1,0]))";
  auto i00 = [&](const std::string &qq) {
    return E("a[0,0] - (((" + q + ")^2 + " + qq + ")*" + r + " + 2*(" + q + ")*" + r + ";[1,0] + " +
                 r + ";[2,0] + " + s + "*" + t + " + " + t + ";[1,0])",
             2);
  };
  const InvariantRecord *rec = need(c, cs.records, "I_{00}");
  if (rec) {
    c.check("I00 equals the printed constant term with (q^2 + q) r", rec->expression == i00("(" + q + ")"));
    c.check("printed I00 with (q^2 + q) r is invariant", invariant(ctx, i00("(" + q + ")")));
    c.check("I00 equals the constant term with (q^2 + q_x) r", rec->expression == i00("(" + q + ");[1,0]"));
    c.check("I00 with (q^2 + q_x) r is invariant", invariant(ctx, i00("(" + q + ");[1,0]")));
  }
}

// 3
void xxy_xyy(Criterion &c) {
  CompleteSet cs = with_templates("xxy_xyy", "xxy_xyy_templates");
  DeltaContext ctx(cs.analysis.spec);
  const InvariantRecord *ie = nullptr, *ic = nullptr;
  for (const auto &r : cs.records) {
    if (r.kind == InvariantKind::Extra)
      ie = &r;
    if (r.kind == InvariantKind::Compatibility)
      ic = &r;
  }
  if (!ie || !ic)
    c.check("extra and compatibility invariants constructed", false);
  equal_and_invariant(c, ctx, "I_e = a11 - 2a20 - 2a02", ie, E("a[1,1] - 2*a[2,0] - 2*a[0,2]", 2));
  equal_and_invariant(c, ctx, "I_c = a20x - a02y", ic, E("a[2,0];[1,0] - a[0,2];[0,1]", 2));

  std::string p = "a[0,2]", q = "a[2,0]", r = "(a[1,1] - a[2,0] - a[0,2])";
  equal_and_invariant(c, ctx, "I10 = a10 - (q(p + r) + q_x + r_y)", need(c, cs.records, "I_{10}"),
                      E("a[1,0] - (" + q + "*(" + p + " + " + r + ") + " + q + ";[1,0] + " + r + ";[0,1])", 2));
  equal_and_invariant(c, ctx, "I01 = a01 - (p(q + r) + q_x + r_x)", need(c, cs.records, "I_{01}"),
                      E("a[0,1] - (" + p + "*(" + q + " + " + r + ") + " + q + ";[1,0] + " + r + ";[1,0])", 2));
  std::string rp = "(a[1,1] - a[2,0] - a[0,2] - 1)";
  std::string t = "(a[1,0] - (" + q + ";[1,0] + " + rp + ";[0,1] + " + q + "*(" + p + " + " + rp + ")))";
  std::string s = "(a[0,1] - (" + q + ";[1,0] + " + rp + ";[1,0] + " + p + "*(" + q + " + " + rp + ")))";
  equal_and_invariant(c, ctx, "I00 = a00 - ((pq + q_x) r' + q r'_x + p r'_y + r'_xy + st + t_x)",
                      need(c, cs.records, "I_{00}"),
                      E("a[0,0] - ((" + p + "*" + q + " + " + q + ";[1,0])*" + rp + " + " + q + "*" + rp +
                            ";[1,0] + " + p + "*" + rp + ";[0,1] + " + rp + ";[1,1] + " + s + "*" + t + " + " +
                            t + ";[1,0])",
                        2));
  c.check("audit: 1 extra", cs.audit.extra_found == 1 && cs.audit.extra_expected == 1);
  c.check("audit: 1 compatibility", cs.audit.compatibility_found == 1 && cs.audit.compatibility_expected == 1);
  c.check("audit: 3 upward", cs.audit.upward_found == 3 && cs.audit.upward_expected == 3);
}

// 4
void x3(Criterion &c) {
  CompleteSet cs = with_templates("x3", "x3_templates");
  DeltaContext ctx(cs.analysis.spec);
  JetExpr a02 = coeff({0, 2}), a11 = coeff({1, 1});

  const InvariantRecord *ic = need(c, cs.records, "I_c(x,y)");
  equal_and_invariant(c, ctx, "compatibility 2 a20y - 3 (a01/a02)_x + (a11 a20/a02)_x", ic,
                      E("2*a[2,0];[0,1] - 3*(a[0,1]/a[0,2]);[1,0] + (a[1,1]*a[2,0]/a[0,2]);[1,0]", 2));
  if (ic)
    c.check("compatibility records assumption a02", has_assumption(*ic, a02));

  std::string p = "(a[2,0]/3)";
  std::string q1 = "((a[0,1] - a[1,1]*a[2,0]/3)/(2*a[0,2]))";
  const InvariantRecord *i10 = need(c, cs.records, "I_{10}");
  equal_and_invariant(c, ctx, "I10 = a10 - 3(p_x + p^2) - a11 q", i10,
                      E("a[1,0] - 3*(" + p + ";[1,0] + " + p + "^2) - a[1,1]*" + q1, 2));
  if (i10)
    c.check("I10 records assumption a02", has_assumption(*i10, a02));

  std::string q2 = "((a[1,0] - 3*(" + p + ";[1,0] + " + p + "^2))/a[1,1])";
  const InvariantRecord *i01 = need(c, cs.records, "I_{01}");
  equal_and_invariant(c, ctx, "I01 = a01 - a11 p - 2 a02 q", i01,
                      E("a[0,1] - a[1,1]*" + p + " - 2*a[0,2]*" + q2, 2));
  if (i01)
    c.check("I01 records assumption a11", has_assumption(*i01, a11));

  if (i10 && i01) {
    auto [u, w] = decouple_pair(*i10, *i01, a11, E("2*a[0,2]", 2));
    JetExpr one_minus = E("1 - 2*a[1,1]*a[0,2]", 2);
    c.check("decoupled pair records assumption 1 - 2 a11 a02",
            has_assumption(u, one_minus) && has_assumption(w, one_minus));
    c.check("decoupled pair is invariant", invariant(ctx, u.expression) && invariant(ctx, w.expression));
    c.note("I01 + (2 a02/a11) I10 vanishes identically: " +
           std::string((i01->expression + E("2*a[0,2]/a[1,1]", 2) * i10->expression).is_zero() ? "yes"
                                                                                                 : "no"));
  }

  std::string rr = "((a[0,1] - 2*a[0,2]*" + q2 + ")/a[1,1])";
  std::string head = "a[0,0] - (" + p + "^3 + 3*" + p + "*" + p + ";[1,0] + " + p + ";[2,0] + a[1,1]*(" + rr +
                     "*" + q2 + " + " + q2 + ";[1,0]) + a[0,2]*(" + q2 + "^2 + " + q2;
  JetExpr printed = E(head + ";[1,0]))", 2);
  JetExpr with_qy = E(head + ";[0,1]))", 2);
  const InvariantRecord *i00 = need(c, cs.records, "I_{00}");
  if (i00) {
    c.check("I00 equals the printed form with a02 (q^2 + q_x)", i00->expression == printed);
    InvarianceResult pr = is_invariant(printed, ctx);
    c.check("printed I00 with a02 (q^2 + q_x) is invariant", pr.invariant,
            pr.invariant ? "" : "delta is nonzero");
    c.check("I00 equals the form with a02 (q^2 + q_y)", i00->expression == with_qy);
    c.check("I00 with a02 (q^2 + q_y) is invariant", invariant(ctx, with_qy));
    c.check("I00 records assumption a11", has_assumption(*i00, a11));
  }
}

// 5
void xyz(Criterion &c) {
  ClassSpec spec = support::load_spec("xyz");
  ClassAnalysis a = analyze(spec);
  DeltaContext ctx(spec);
  std::vector<std::pair<MultiIndex, std::string>> expected{
      {{1, 0, 0}, "a[1,0,0] - a[1,0,1]*a[1,1,0] - a[1,1,0];[0,1,0]"},
      {{0, 1, 0}, "a[0,1,0] - a[0,1,1]*a[1,1,0] - a[1,1,0];[1,0,0]"},
      {{0, 0, 1}, "a[0,0,1] - a[0,1,1]*a[1,0,1] - a[1,0,1];[1,0,0]"}};
  for (const auto &[v, text] : expected) {
    InvariantRecord r = upward_invariant_generic(a, v);
    c.check("generic I" + v.compact() + " = " + text, r.expression == E(text, 3));
  }

  CompleteSet cs = with_templates("xyz", "xyz_templates");
  const InvariantRecord *i000 = need(c, cs.records, "I_{000}");
  if (!i000)
    return;
  std::string p = "(a[0,1,1] - 1)", q = "(a[1,0,1] - 1)", r = "(a[1,1,0] - 1)";
  std::string s = "(a[0,1,0] - " + p + "*" + r + " - " + r + ";[1,0,0] - " + r + ")";
  std::string t = "(a[0,0,1] - " + p + "*" + q + " - " + q + ";[1,0,0] - " + p + ")";
  std::string u = "(a[1,0,0] - " + q + "*" + r + " - " + r + ";[0,1,0] - " + q + ")";
  JetExpr displayed = E("a[0,0,0] - (" + p + "*" + q + "*" + r + " + " + r + "*" + q + ";[1,0,0] + " + p + "*" +
                            r + ";[0,1,0] + " + q + "*" + r + ";[1,0,0] + " + r + ";[1,1,0] + " + s + "*" + q +
                            " + " + q + ";[1,0,0] + " + t + "*" + r + " + " + r + ";[0,1,0] + " + p + "*" + u +
                            " + " + p + ";[0,0,1])",
                        3);
  c.check("template I000 equals the displayed constant term", i000->expression == displayed);
  auto t0 = std::chrono::steady_clock::now();
  bool inv = invariant(ctx, i000->expression);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.check("template I000 is invariant (" + std::to_string(secs) + " s, budget 60 s)", inv && secs < 60);

  JetExpr icxz = E("a[0,1,1];[0,0,1] - a[1,1,0];[1,0,0]", 3);
  JetExpr icyz = E("a[1,0,1];[0,0,1] - a[1,1,0];[0,1,0]", 3);
  for (const auto &ic : {icxz, icyz}) {
    bool produced = false;
    for (const auto &rec : cs.records)
      produced = produced || (rec.kind == InvariantKind::Compatibility &&
                              support::equal_up_to_constant(rec.expression, ic));
    c.check("compatibility " + ic.to_string() + " produced up to sign", produced);
  }
  JetExpr combined = symmetric_hyperbolic_recipe(i000->expression, icxz, icyz,
                                                 support::find_label(cs.records, "I_{100}")->expression,
                                                 support::find_label(cs.records, "I_{010}")->expression,
                                                 support::find_label(cs.records, "I_{001}")->expression);
  JetExpr symmetric = E("a[0,0,0] - (a[1,0,0]*a[0,1,1] + a[0,1,0]*a[1,0,1] + a[0,0,1]*a[1,1,0] - "
                        "2*a[0,1,1]*a[1,0,1]*a[1,1,0] + (a[1,1,0];[1,1,0] + a[1,0,1];[1,0,1] + "
                        "a[0,1,1];[0,1,1])/3)",
                        3);
  c.check("symmetric combination equals the displayed symmetric invariant", combined == symmetric);
}

// 6
void order5(Criterion &c) {
  ClassAnalysis a = analyze(support::load_spec("order5_3d"));
  DeltaContext ctx(a.spec);
  GradientSolution sol = solve_gradient(a);
  auto extras = extra_invariants(a, sol);
  auto compat = compatibility_invariants(a, sol);
  auto contains = [](const std::vector<InvariantRecord> &recs, const JetExpr &e) {
    for (const auto &r : recs)
      if (r.expression == e)
        return true;
    return false;
  };
  c.check("extra a220/p - a112/3", contains(extras, E("a[2,2,0]/p - a[1,1,2]/3", 3)));
  c.check("extra a130/q - a112/3", contains(extras, E("a[1,3,0]/q - a[1,1,2]/3", 3)));
  c.check("compatibility a103x - a013y", contains(compat, E("a[1,0,3];[1,0,0] - a[0,1,3];[0,1,0]", 3)));
  c.check("5 extra invariants", extras.size() == 5, std::to_string(extras.size()));
  c.check("3 compatibility invariants", compat.size() == 3, std::to_string(compat.size()));
  bool all = true;
  for (const auto &r : extras)
    all = all && invariant(ctx, r.expression);
  for (const auto &r : compat)
    all = all && invariant(ctx, r.expression);
  c.check("all extra and compatibility invariants pass is_invariant", all);
}

// 7
void inductive(Criterion &c) {
  c.check("n = 2 gives a00 - (a10 a01 + a10x1)",
          recursive_hyperbolic_bottom(2).expression == E("a[0,0] - (a[1,0]*a[0,1] + a[1,0];[1,0])", 2));
  std::string A = "(a[1,0,0] - (a[1,1,0] - 1)*a[1,0,1] - a[1,0,1];[0,0,1])";
  std::string B = "(a[0,1,0] - (a[1,1,0] - 1)*a[0,1,1] - a[0,1,1];[0,0,1])";
  JetExpr three = E("a[0,0,0] - ((a[1,1,0] - 1)*a[0,0,1] + a[0,0,1];[0,0,1]) - (" + A + "*" + B + " + " + A +
                        ";[1,0,0])",
                    3);
  InvariantRecord r3 = recursive_hyperbolic_bottom(3);
  c.check("n = 3 equals the displayed I000", r3.expression == three);
  c.check("n = 3 is invariant", invariant(DeltaContext(ClassSpec(3, {{{1, 1, 1}, JetExpr(1)}})), r3.expression));
  InvariantRecord r4 = recursive_hyperbolic_bottom(4);
  c.check("n = 4 is invariant",
          invariant(DeltaContext(ClassSpec(4, {{{1, 1, 1, 1}, JetExpr(1)}})), r4.expression));
}

// 8
void negatives(Criterion &c) {
  ClassAnalysis xx_y = analyze(support::load_spec("not_flat_xx_y"));
  c.check("{D_xx, D_y} is not approximately flat", !xx_y.approximately_flat);
  ClassAnalysis xz_yz = analyze(support::load_spec("not_flat_xz_yz"));
  c.check("{D_xz, D_yz} is not approximately flat", !xz_yz.approximately_flat);
  ClassAnalysis nf = analyze(support::load_spec("not_framed"));
  bool reported = false;
  for (const auto &d : nf.diagnostics)
    reported = reported || d.find("duplicate phi-vector (2,2)") != std::string::npos;
  c.check("D_xx + 2 D_xy + D_yy is not framed", !nf.framed);
  c.check("duplicate phi-vector (2,2) reported", reported);
  for (const char *name : {"not_flat_xx_y", "not_flat_xz_yz", "not_framed"}) {
    bool rejected = false;
    try {
      complete_set(support::load_spec(name));
    } catch (const HypothesisError &) {
      rejected = true;
    }
    c.check(std::string(name) + " rejected by complete_set", rejected);
  }
}

// 9
void properties(Criterion &c) {
  const std::uint64_t seed = kDefaultSeed;
  auto run = [&](const std::string &name, const std::string &err) { c.check(name, err.empty(), err); };
  run("delta linearity and commutation with d/dx_i (200 cases)",
      props::check_delta_linearity_and_commutation(seed + 1));
  run("gauge by g then h equals gauge by g + h (200 cases)", props::check_gauge_group_action(seed + 2));
  run("op_mul associativity, order <= 3, n <= 3 (200 cases)", props::check_op_mul_associativity(seed + 3));
  run("delta(a_v) = phi(v) . grad g on every fixture and 200 random classes",
      props::check_phi_against_gauge_all(seed + 4));
  run("maximal coefficients preserved by the gauge (200 cases)", props::check_maximal_preserved(seed + 5));
}

// 10
void audits(Criterion &c) {
  for (const auto &name : support::good_fixtures()) {
    CompleteSet cs = complete_set(support::load_spec(name));
    const ClassAnalysis &a = cs.analysis;
    const std::size_t n = a.dim(), s = a.submaximal.size();
    const CompletenessAudit &au = cs.audit;
    bool counts = au.extra_expected == s - n && au.extra_found == s - n &&
                  au.compatibility_expected == n * (n - 1) / 2 && au.compatibility_found == n * (n - 1) / 2 &&
                  au.upward_expected == a.interior.size() && au.upward_found == a.interior.size() &&
                  au.maximal_expected == a.maximal.size() && au.maximal_found == a.maximal.size();
    c.check(name + ": " + std::to_string(au.maximal_found) + " maximal, " + std::to_string(au.extra_found) +
                " extra, " + std::to_string(au.compatibility_found) + " compatibility, " +
                std::to_string(au.upward_found) + " upward",
            counts && au.complete());
  }
}

} // namespace

int main() {
  struct Entry {
    int id;
    std::string title;
    std::function<void(Criterion &)> fn;
  };
  std::vector<Entry> entries{
      {1, "classical hyperbolic operator: h and k", classical},
      {2, "xxy class: I_c, I10, I01, I00", xxy},
      {3, "xxy + xyy class: I_e, I_c, I10, I01, I00 and audit", xxy_xyy},
      {4, "x3 class: compatibility, I10, I01, I00 and assumptions", x3},
      {5, "xyz class: generic upward invariants, I000, symmetric combination", xyz},
      {6, "order five 3D class with symbolic p, q: extras and compatibility", order5},
      {7, "inductive hyperbolic bottom invariants for n = 2, 3, 4", inductive},
      {8, "negative fixtures rejected", negatives},
      {9, "property suites", properties},
      {10, "completeness audits for every fixture class", audits},
  };
  int failed = 0;
  for (const auto &e : entries) {
    Criterion c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      e.fn(c);
    } catch (const std::exception &ex) {
      c.check("no exception", false, ex.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!c.ok())
      ++failed;
    std::cout << (c.ok() ? "PASS" : "FAIL") << " criterion " << e.id << ": " << e.title << " (" << secs
              << " s)\n";
    for (const auto &l : c.lines())
      std::cout << "    " << l << "\n";
    std::cout.flush();
  }
  std::cout << (entries.size() - static_cast<std::size_t>(failed)) << "/" << entries.size()
            << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}

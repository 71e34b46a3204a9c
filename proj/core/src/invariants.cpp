#include "lapinv/invariants.hpp"

#include <algorithm>
#include <future>
#include <set>

#include "lapinv/parser.hpp"

namespace lapinv {

std::string to_string(InvariantKind k) {
  switch (k) {
  case InvariantKind::Maximal:
    return "maximal";
  case InvariantKind::Extra:
    return "extra";
  case InvariantKind::Compatibility:
    return "compatibility";
  case InvariantKind::Upward:
    return "upward";
  }
  return "?";
}

std::string variable_name(std::size_t i, std::size_t n) {
  if (n <= 3)
    return std::string(1, "xyz"[i]);
  return "x" + std::to_string(i + 1);
}

namespace {

std::string vector_label(const MultiIndex &v) { return "I_{" + v.compact() + "}"; }

std::string name_suffix(const MultiIndex &v) {
  bool digits = std::all_of(v.entries().begin(), v.entries().end(), [](int e) { return e < 10; });
  if (digits)
    return v.compact();
  std::string s;
  for (std::size_t i = 0; i < v.dim(); ++i)
    s += (i ? "_" : "") + std::to_string(v[i]);
  return s;
}

bool same(const JetExpr &a, const JetExpr &b) { return a == b; }

Rational integer_content(const Polynomial &p) {
  // gcd of numerators over lcm of denominators
  mpz_class g = 0, l = 1;
  for (const auto &[m, c] : p.terms()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  }
  Rational r(g, l);
  r.canonicalize();
  return r;
}

// Scales e by a positive rational so its numerator has coprime integer
// coefficients.
JetExpr primitive(const JetExpr &e) {
  if (e.is_zero())
    return e;
  Rational c = integer_content(e.num());
  return e * JetExpr(Rational(1) / c);
}

// E = coef * x + rest with x underived; nullopt when E is not of that form.
struct LinearSplit {
  JetExpr coef, rest;
};

std::optional<LinearSplit> split_linear(const JetExpr &e, const BaseSymbol &x) {
  VarId xv = intern(JetVariable{x, MultiIndex(x.dim)});
  for (VarId id : e.variables()) {
    const JetVariable &jv = var_info(id);
    if (jv.base == x && !jv.deriv.is_zero())
      return std::nullopt;
  }
  if (e.den().degree_in(xv) > 0 || e.num().degree_in(xv) > 1)
    return std::nullopt;
  JetExpr den(e.den());
  return LinearSplit{JetExpr(e.num().coefficient(xv, 1)) / den,
                     JetExpr(e.num().coefficient(xv, 0)) / den};
}

std::set<BaseSymbol> unknowns_in(const JetExpr &e, const std::set<BaseSymbol> &unsolved) {
  std::set<BaseSymbol> found;
  for (VarId id : e.variables()) {
    const JetVariable &jv = var_info(id);
    if (unsolved.count(jv.base))
      found.insert(jv.base);
  }
  return found;
}

struct Equation {
  MultiIndex at;
  JetExpr expr;  // must vanish
};

struct SolveResult {
  Bindings bindings;
  std::vector<std::pair<std::string, JetExpr>> order;
  std::vector<JetExpr> assumptions;
  std::vector<Equation> equations;  // fully substituted
};

void bind_into(SolveResult &r, const BaseSymbol &x, const JetExpr &value) {
  Substituter s(Bindings{{x, value}});
  for (auto &eq : r.equations)
    eq.expr = s(eq.expr);
  r.bindings.emplace(x, value);
  r.order.emplace_back(x.name, value);
}

// Greedy triangular elimination: repeatedly picks the first equation that
// mentions exactly one unsolved parameter, underived and linearly, and solves
// for it.
void solve_triangular(SolveResult &r, const std::vector<BaseSymbol> &unknowns) {
  std::set<BaseSymbol> unsolved(unknowns.begin(), unknowns.end());
  std::vector<bool> used(r.equations.size(), false);
  while (!unsolved.empty()) {
    bool progress = false;
    for (std::size_t k = 0; k < r.equations.size() && !progress; ++k) {
      if (used[k])
        continue;
      const JetExpr &e = r.equations[k].expr;
      auto u = unknowns_in(e, unsolved);
      if (u.size() != 1)
        continue;
      const BaseSymbol x = *u.begin();
      auto sp = split_linear(e, x);
      if (!sp || sp->coef.is_zero())
        continue;
      JetExpr value = -sp->rest / sp->coef;
      if (!sp->coef.is_constant())
        add_assumptions(r.assumptions, assumption_factors(sp->coef));
      used[k] = true;
      unsolved.erase(x);
      bind_into(r, x, value);
      progress = true;
    }
    if (!progress) {
      std::string names;
      for (const auto &b : unsolved)
        names += (names.empty() ? "" : ", ") + b.name;
      throw TemplateError("cannot solve for " + names +
                          ": no remaining coefficient equation is linear in exactly one of them");
    }
  }
}

// Gauss-Jordan on a square matrix; row k pivots on the first column that is
// nonzero after eliminating earlier pivots.
struct Inversion {
  std::vector<std::size_t> pivot;
  std::vector<std::vector<JetExpr>> inverse;  // inverse[i][k]
  std::vector<JetExpr> assumptions;
};

Inversion invert(std::vector<std::vector<JetExpr>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<JetExpr>> b(n, std::vector<JetExpr>(n));
  for (std::size_t i = 0; i < n; ++i)
    b[i][i] = JetExpr(1);
  Inversion inv;
  std::vector<bool> taken(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t col = n;
    for (std::size_t j = 0; j < n; ++j)
      if (!taken[j] && !a[k][j].is_zero()) {
        col = j;
        break;
      }
    if (col == n)
      throw HypothesisError("not framed: framing rows are linearly dependent");
    taken[col] = true;
    inv.pivot.push_back(col);
    JetExpr piv = a[k][col];
    if (!piv.is_constant())
      add_assumptions(inv.assumptions, assumption_factors(piv));
    for (std::size_t j = 0; j < n; ++j) {
      a[k][j] = a[k][j] / piv;
      b[k][j] = b[k][j] / piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == k || a[r][col].is_zero())
        continue;
      JetExpr f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[k][j];
        b[r][j] -= f * b[k][j];
      }
    }
  }
  // Row k now reads x_{pivot[k]} = sum_j b[k][j] rhs_j.
  inv.inverse.assign(n, std::vector<JetExpr>(n));
  for (std::size_t k = 0; k < n; ++k)
    inv.inverse[inv.pivot[k]] = b[k];
  return inv;
}

void require_hypotheses(const ClassAnalysis &a) {
  if (a.approximately_flat && a.framed)
    return;
  std::string msg;
  for (const auto &d : a.diagnostics)
    msg += (msg.empty() ? "" : "; ") + d;
  throw HypothesisError(msg.empty() ? "class is not framed and approximately flat" : msg);
}

bool is_maximal_parameter(const BaseSymbol &b, const ClassSpec &spec) {
  for (const auto &t : spec.maximal_terms())
    if (!t.coefficient.is_constant() && t.coefficient == param(b.name, spec.dim()))
      return true;
  return false;
}

} // namespace

std::vector<JetExpr> assumption_factors(const JetExpr &e) {
  std::vector<JetExpr> out;
  if (e.is_zero())
    throw std::domain_error("division by an expression that vanishes identically");
  for (const auto &part : {e.num(), e.den()}) {
    Monomial content = part.monomial_content();
    for (const auto &[v, k] : content.factors())
      out.push_back(JetExpr::var(v));
    Polynomial rest = part.divide_monomial(content);
    if (rest.is_constant())
      continue;
    JetExpr r = primitive(JetExpr(rest));
    // positive constant term when present, else positive leading coefficient
    Rational lead = r.num().leading_term().second;
    for (const auto &[m, c] : r.num().terms())
      if (m.is_one())
        lead = c;
    if (lead < 0)
      r = -r;
    out.push_back(r);
  }
  return out;
}

void add_assumptions(std::vector<JetExpr> &into, const std::vector<JetExpr> &more) {
  for (const auto &m : more)
    if (std::none_of(into.begin(), into.end(), [&](const JetExpr &x) { return same(x, m); }))
      into.push_back(m);
}

// ------------------------------------------------------------- maximal

std::vector<InvariantRecord> maximal_invariants(const ClassSpec &spec) {
  std::vector<InvariantRecord> out;
  for (const auto &t : spec.maximal_terms()) {
    InvariantRecord r;
    r.kind = InvariantKind::Maximal;
    r.label = vector_label(t.vector);
    r.target = t.vector;
    r.expression = t.coefficient;
    out.push_back(std::move(r));
  }
  return out;
}

// ------------------------------------------------------------ gradient

GradientSolution solve_gradient(const ClassAnalysis &a) {
  require_hypotheses(a);
  const std::size_t n = a.dim();
  GradientSolution sol;
  sol.framing = a.framing_set;
  std::vector<std::vector<JetExpr>> rows;
  for (const auto &v : sol.framing)
    rows.push_back(a.phi_vectors.at(v));
  Inversion inv = invert(rows);
  sol.pivot = inv.pivot;
  sol.assumptions = inv.assumptions;
  sol.gradient.assign(n, JetExpr());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (!inv.inverse[i][k].is_zero())
        sol.gradient[i] += inv.inverse[i][k] * coeff(sol.framing[k]);
  for (const auto &v : a.submaximal)
    if (std::find(sol.framing.begin(), sol.framing.end(), v) == sol.framing.end())
      sol.residual.push_back(v);
  return sol;
}

std::vector<InvariantRecord> extra_invariants(const ClassAnalysis &a, const GradientSolution &sol) {
  std::vector<InvariantRecord> out;
  for (const auto &v : sol.residual) {
    const auto &row = a.phi_vectors.at(v);
    InvariantRecord r;
    r.kind = InvariantKind::Extra;
    r.label = vector_label(v);
    r.target = v;
    r.assumptions = sol.assumptions;
    std::size_t nonzero = 0, at = 0;
    for (std::size_t i = 0; i < row.size(); ++i)
      if (!row[i].is_zero()) {
        ++nonzero;
        at = i;
      }
    if (nonzero == 1) {
      r.expression = coeff(v) / row[at] - sol.gradient[at];
      if (!row[at].is_constant())
        add_assumptions(r.assumptions, assumption_factors(row[at]));
    } else {
      JetExpr e = coeff(v);
      for (std::size_t i = 0; i < row.size(); ++i)
        if (!row[i].is_zero())
          e -= row[i] * sol.gradient[i];
      r.expression = e;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<InvariantRecord> compatibility_invariants(const ClassAnalysis &a,
                                                      const GradientSolution &sol) {
  const std::size_t n = a.dim();
  std::vector<InvariantRecord> out;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = k + 1; l < n; ++l) {
      std::size_t i = sol.pivot[k], j = sol.pivot[l];
      InvariantRecord r;
      r.kind = InvariantKind::Compatibility;
      r.label = "I_c(" + variable_name(std::min(i, j), n) + "," + variable_name(std::max(i, j), n) + ")";
      r.expression = primitive(sol.gradient[i].derive(j) - sol.gradient[j].derive(i));
      r.assumptions = sol.assumptions;
      out.push_back(std::move(r));
    }
  return out;
}

// ----------------------------------------------------- generic C and B

namespace {

struct GenericSetup {
  FactorTemplate tpl;
  std::vector<BaseSymbol> c;
  std::vector<BaseSymbol> p;  // in canonical order of S'
  std::vector<BaseSymbol> q;  // decreasing canonical order of W
  std::vector<MultiIndex> sprime, w;
};

GenericSetup generic_setup(const ClassAnalysis &a, const std::vector<MultiIndex> &w) {
  const std::size_t n = a.dim();
  const ClassSpec &spec = a.spec;
  GenericSetup g;
  g.tpl.dim = n;
  for (std::size_t i = 0; i < n; ++i)
    g.c.push_back(BaseSymbol::parameter("c" + std::to_string(i + 1), n));
  auto shift = [&](const BaseSymbol &b) { return param(b.name, n); };

  std::map<MultiIndex, MultiIndex, CanonicalLess> f;  // S' -> M
  for (const auto &v : a.submaximal) {
    if (std::find(a.framing_set.begin(), a.framing_set.end(), v) != a.framing_set.end())
      continue;
    g.sprime.push_back(v);
    std::optional<MultiIndex> best;
    for (std::size_t i = 0; i < n; ++i) {
      MultiIndex up = v.plus_unit(i);
      if (a.maximal.count(up) && (!best || up < *best))
        best = up;
    }
    f.emplace(v, *best);
  }
  std::map<MultiIndex, BaseSymbol, CanonicalLess> pname;
  for (const auto &v : g.sprime) {
    g.p.push_back(BaseSymbol::parameter("p_" + name_suffix(v), n));
    pname.emplace(v, g.p.back());
  }

  for (const auto &t : spec.maximal_terms()) {
    const MultiIndex &m = t.vector;
    std::vector<std::size_t> sm;
    for (std::size_t i = 0; i < n; ++i) {
      if (m[i] == 0)
        continue;
      auto it = f.find(m.minus_unit(i));
      if (it != f.end() && it->second == m)
        sm.push_back(i);
    }
    FactorProduct prod;
    prod.prefactor = t.coefficient;
    for (std::size_t i = 0; i < n; ++i) {
      int u = m[i] - (std::find(sm.begin(), sm.end(), i) != sm.end() ? 1 : 0);
      if (u > 0)
        prod.factors.push_back(Factor{{MultiIndex::unit(n, i)}, shift(g.c[i]), unsigned(u)});
    }
    for (std::size_t i : sm)
      prod.factors.push_back(Factor{{MultiIndex::unit(n, i)}, shift(pname.at(m.minus_unit(i))), 1});
    g.tpl.products.push_back(std::move(prod));
  }

  g.w = w;
  std::sort(g.w.begin(), g.w.end(), CanonicalLess{});
  for (const auto &x : g.w) {
    std::optional<MultiIndex> cover;
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
      MultiIndex up = x.plus_unit(i);
      if (a.all_vectors.count(up) && !a.maximal.count(up) && (!cover || up < *cover)) {
        cover = up;
        j = i;
      }
    }
    if (!cover)
      throw std::logic_error("interior vector " + x.to_string() + " has no non-maximal cover");
    g.q.push_back(BaseSymbol::parameter("q_" + name_suffix(x), n));
    FactorProduct prod;
    prod.factors.push_back(Factor{{MultiIndex::unit(n, j)}, shift(g.q.back()), 1});
    for (std::size_t i = 0; i < n; ++i)
      if (x[i] > 0)
        prod.factors.push_back(Factor{{MultiIndex::unit(n, i)}, shift(g.c[i]), unsigned(x[i])});
    g.tpl.products.push_back(std::move(prod));
  }
  return g;
}

struct GenericSolve {
  GenericSetup setup;
  SolveResult result;
  DiffOperator remainder;
};

GenericSolve generic_solve(const ClassAnalysis &a, const std::vector<MultiIndex> &w) {
  require_hypotheses(a);
  const std::size_t n = a.dim();
  GenericSolve gs{generic_setup(a, w), {}, DiffOperator(n)};
  const GenericSetup &g = gs.setup;
  DiffOperator L = a.spec.generic_operator();
  DiffOperator C = expand_template(g.tpl);
  DiffOperator R = L - C;
  for (const auto &v : C.support())
    if (!a.all_vectors.count(v))
      throw std::logic_error("generic construction produced D" + v.to_string() + " outside the class");

  // c from the framing equations: coefficient of D^{v_k} in C is linear in c.
  std::vector<std::vector<JetExpr>> rows;
  std::vector<JetExpr> rhs;
  std::vector<VarId> cvars;
  for (const auto &b : g.c)
    cvars.push_back(intern(JetVariable{b, MultiIndex(n)}));
  for (const auto &v : a.framing_set) {
    JetExpr cv = C.coefficient(v);
    if (!cv.is_polynomial())
      throw std::logic_error("framing coefficient is not polynomial");
    std::vector<JetExpr> row;
    Polynomial rest = cv.num();
    for (VarId x : cvars) {
      if (cv.num().degree_in(x) > 1)
        throw std::logic_error("framing coefficient is not linear in c");
      row.emplace_back(cv.num().coefficient(x, 1));
      rest = rest.coefficient(x, 0);
    }
    rows.push_back(row);
    rhs.push_back(coeff(v) - JetExpr(rest));
  }
  Inversion inv = invert(rows);
  SolveResult &r = gs.result;
  r.assumptions = inv.assumptions;
  for (const auto &v : a.all_vectors)
    if (!a.is_interior(v) || std::find(g.w.begin(), g.w.end(), v) != g.w.end())
      r.equations.push_back({v, R.coefficient(v)});
  for (std::size_t i = 0; i < n; ++i) {
    JetExpr ci;
    for (std::size_t k = 0; k < n; ++k)
      if (!inv.inverse[i][k].is_zero())
        ci += inv.inverse[i][k] * rhs[k];
    bind_into(r, g.c[i], ci);
  }
  // p_v singly, then q_w from the top down; the equation order makes each
  // step a single-unknown solve.
  std::vector<BaseSymbol> rest_unknowns = g.p;
  rest_unknowns.insert(rest_unknowns.end(), g.q.begin(), g.q.end());
  std::stable_sort(r.equations.begin(), r.equations.end(), [&](const Equation &x, const Equation &y) {
    return CanonicalLess{}(x.at, y.at);
  });
  solve_triangular(r, rest_unknowns);
  for (const auto &eq : r.equations)
    if (!eq.expr.is_zero())
      throw std::logic_error("generic construction left coefficient " + eq.at.to_string() +
                             " nonzero: " + eq.expr.to_string());
  Substituter s(r.bindings);
  gs.remainder = R.map_coefficients([&](const JetExpr &e) { return s(e); });
  return gs;
}

} // namespace

CmConstruction build_Cm(const ClassAnalysis &a) {
  GenericSolve gs = generic_solve(a, {});
  CmConstruction out;
  out.symbolic = gs.setup.tpl;
  out.bindings = gs.result.bindings;
  out.solve_order = gs.result.order;
  out.assumptions = gs.result.assumptions;
  out.remainder = gs.remainder;
  return out;
}

InvariantRecord upward_invariant_generic(const ClassAnalysis &a, const MultiIndex &v) {
  require_hypotheses(a);
  if (!a.is_interior(v))
    throw std::invalid_argument("upward_invariant_generic: " + v.to_string() + " is not interior");
  std::vector<MultiIndex> w;
  for (const auto &x : a.interior)
    if (below(v, x))
      w.push_back(x);
  GenericSolve gs = generic_solve(a, w);
  InvariantRecord r;
  r.kind = InvariantKind::Upward;
  r.label = vector_label(v);
  r.target = v;
  r.expression = gs.remainder.coefficient(v);
  r.assumptions = gs.result.assumptions;
  r.representation = Representation{gs.setup.tpl.to_string(), gs.result.order};
  return r;
}

// ------------------------------------------------------ template engine

namespace {

std::vector<BaseSymbol> template_parameters(const ClassSpec &spec, const FactorTemplate &tpl,
                                            const std::vector<std::string> &names) {
  const std::size_t n = spec.dim();
  std::vector<BaseSymbol> out;
  if (!names.empty()) {
    for (const auto &nm : names) {
      if (!is_valid_parameter_name(nm))
        throw TemplateError("invalid parameter name '" + nm + "'");
      out.push_back(BaseSymbol::parameter(nm, n));
    }
    return out;
  }
  std::set<BaseSymbol> seen;
  auto visit = [&](const JetExpr &e) {
    for (VarId id : e.variables()) {
      const JetVariable &jv = var_info(id);
      if (jv.base.is_gauge())
        throw TemplateError("template must not mention the gauge symbol g");
      if (jv.base.is_parameter() && !is_maximal_parameter(jv.base, spec) && seen.insert(jv.base).second)
        out.push_back(jv.base);
    }
  };
  for (const auto &p : tpl.products) {
    visit(p.prefactor);
    for (const auto &f : p.factors)
      visit(f.shift);
  }
  return out;
}

IndexSet maximal_elements(const IndexSet &s) {
  IndexSet out;
  for (const auto &v : s)
    if (std::none_of(s.begin(), s.end(), [&](const MultiIndex &w) { return below(v, w); }))
      out.insert(v);
  return out;
}

// Fresh parameters named "<name>_gauged" matched against the gauged sum.
bool closed_under_gauge(const DiffOperator &C, const FactorTemplate &tpl,
                        const std::vector<BaseSymbol> &params) {
  const std::size_t n = tpl.dim;
  Bindings rename;
  std::vector<BaseSymbol> fresh;
  for (const auto &p : params) {
    fresh.push_back(BaseSymbol::parameter(p.name + "_gauged", n));
    rename.emplace(p, param(fresh.back().name, n));
  }
  Substituter s(rename);
  DiffOperator Cf = expand_template(tpl.map_exprs([&](const JetExpr &e) { return s(e); }));
  DiffOperator gauged = gauge(C);
  DiffOperator diff = Cf - gauged;
  SolveResult r;
  IndexSet all = Cf.support();
  for (const auto &v : gauged.support())
    all.insert(v);
  for (const auto &v : all)
    r.equations.push_back({v, diff.coefficient(v)});
  try {
    solve_triangular(r, fresh);
  } catch (const TemplateError &) {
    return false;
  }
  return std::all_of(r.equations.begin(), r.equations.end(),
                     [](const Equation &e) { return e.expr.is_zero(); });
}

} // namespace

bool template_closed_under_gauge(const ClassSpec &spec, const FactorTemplate &tpl,
                                 const std::vector<std::string> &parameters) {
  return closed_under_gauge(expand_template(tpl), tpl, template_parameters(spec, tpl, parameters));
}

std::vector<InvariantRecord> upward_invariants_from_template(const ClassAnalysis &a,
                                                             const std::vector<TemplateStage> &stages) {
  const ClassSpec &spec = a.spec;
  const std::size_t n = spec.dim();
  DiffOperator L = spec.generic_operator();
  std::vector<InvariantRecord> out;
  std::set<std::string> labels;
  for (std::size_t si = 0; si < stages.size(); ++si) {
    const TemplateStage &st = stages[si];
    const std::string where = "template stage " + std::to_string(si + 1);
    FactorTemplate tpl;
    try {
      tpl = parse_template(st.template_text, n);
    } catch (const std::exception &e) {
      throw TemplateError(where + ": " + e.what());
    }
    auto params = template_parameters(spec, tpl, st.parameters);
    DiffOperator C = expand_template(tpl);
    for (const auto &v : C.support())
      if (!a.all_vectors.count(v))
        throw TemplateError(where + ": term D" + v.to_string() + " lies outside the class");
    for (const auto &t : st.targets) {
      if (t.dim() != n)
        throw TemplateError(where + ": target " + t.to_string() + " has the wrong dimension");
      if (!a.all_vectors.count(t))
        throw TemplateError(where + ": target " + t.to_string() + " lies outside the class");
    }
    if (st.check_closure && !closed_under_gauge(C, tpl, params))
      throw TemplateError(where + ": template sum is not closed under the gauge action");

    DiffOperator R = L - C;
    IndexSet zeroed(a.maximal.begin(), a.maximal.end());
    for (const auto &t : st.targets)
      zeroed.insert(t);
    SolveResult r;
    for (const auto &v : a.maximal)
      r.equations.push_back({v, R.coefficient(v)});
    for (const auto &v : zeroed)
      if (!a.maximal.count(v))
        r.equations.push_back({v, R.coefficient(v)});
    try {
      solve_triangular(r, params);
    } catch (const TemplateError &e) {
      throw TemplateError(where + ": " + e.what());
    }
    for (const auto &eq : r.equations)
      if (!eq.expr.is_zero())
        throw TemplateError(where + ": coefficient of D" + eq.at.to_string() +
                            " in L - C does not vanish: " + eq.expr.to_string());

    IndexSet remaining;
    for (const auto &v : a.all_vectors)
      if (!zeroed.count(v))
        remaining.insert(v);
    Substituter s(r.bindings);
    for (const auto &v : maximal_elements(remaining)) {
      InvariantRecord rec;
      rec.kind = InvariantKind::Upward;
      rec.label = vector_label(v);
      while (!labels.insert(rec.label).second)
        rec.label += "'";
      rec.target = v;
      rec.expression = s(R.coefficient(v));
      rec.assumptions = r.assumptions;
      rec.representation = Representation{tpl.to_string(), r.order};
      out.push_back(std::move(rec));
    }
  }
  return out;
}

// ----------------------------------------------------------- recursion

InvariantRecord recursive_hyperbolic_bottom(int n) {
  if (n < 2)
    throw std::invalid_argument("recursive_hyperbolic_bottom: n must be at least 2");
  JetExpr e = coeff({0, 0}) - (coeff({1, 0}) * coeff({0, 1}) + coeff({1, 0}, {1, 0}));
  std::vector<std::pair<std::string, JetExpr>> order;
  for (int d = 2; d < n; ++d) {
    auto extend = [](const MultiIndex &v, int last) {
      std::vector<int> ent = v.entries();
      ent.push_back(last);
      return MultiIndex(ent);
    };
    MultiIndex ones(std::vector<int>(d, 1));
    JetExpr p = coeff(extend(ones, 0)) - JetExpr(1);
    const std::size_t z = static_cast<std::size_t>(d);
    e = substitute_vars(e, [&](VarId id) -> std::optional<JetExpr> {
      const JetVariable &jv = var_info(id);
      const MultiIndex &alpha = jv.base.owner;
      JetExpr b = coeff(extend(alpha, 1));
      JetExpr na = coeff(extend(alpha, 0)) - p * b - b.derive(z);
      return na.derive(extend(jv.deriv, 0));
    });
    order.emplace_back("p (level " + std::to_string(d + 1) + ")", p);
  }
  InvariantRecord r;
  r.kind = InvariantKind::Upward;
  MultiIndex zero(static_cast<std::size_t>(n));
  r.label = vector_label(zero);
  r.target = zero;
  r.expression = e;
  if (!order.empty())
    r.representation =
        Representation{"(D[0,...,0,1] + p)*L_{n-1} with b[alpha] = a[alpha,1]", order};
  return r;
}

// -------------------------------------------------------------- audit

bool is_structurally_upward(const JetExpr &expr, const MultiIndex &v, const ClassAnalysis &a) {
  if (v.dim() != a.dim())
    return false;
  JetExpr av = coeff(v);
  JetExpr rest = av - expr;
  for (VarId id : rest.variables()) {
    const JetVariable &jv = var_info(id);
    const BaseSymbol &b = jv.base;
    if (b.dim != a.dim() || b.is_gauge())
      return false;
    if (b.is_parameter()) {
      if (!is_maximal_parameter(b, a.spec))
        return false;
      continue;
    }
    const MultiIndex &w = b.owner;
    if (!a.all_vectors.count(w))
      return false;
    if (!(below(v, w) || a.maximal.count(w) || a.submaximal.count(w)))
      return false;
  }
  return true;
}

CompletenessAudit audit(const ClassAnalysis &a, const std::vector<InvariantRecord> &records) {
  CompletenessAudit au;
  const std::size_t n = a.dim();
  au.maximal_expected = a.maximal.size();
  au.extra_expected = a.submaximal.size() >= n ? a.submaximal.size() - n : 0;
  au.compatibility_expected = n * (n - 1) / 2;
  au.upward_expected = a.interior.size();
  IndexSet maximal_seen, upward_seen;
  for (const auto &r : records) {
    switch (r.kind) {
    case InvariantKind::Maximal:
      if (r.target && a.maximal.count(*r.target))
        maximal_seen.insert(*r.target);
      break;
    case InvariantKind::Extra:
      ++au.extra_found;
      break;
    case InvariantKind::Compatibility:
      ++au.compatibility_found;
      break;
    case InvariantKind::Upward:
      if (r.target && a.is_interior(*r.target) && is_structurally_upward(r.expression, *r.target, a))
        upward_seen.insert(*r.target);
      break;
    }
  }
  au.maximal_found = maximal_seen.size();
  au.upward_found = upward_seen.size();
  for (const auto &v : a.interior)
    if (!upward_seen.count(v))
      au.missing_upward.push_back(v);
  return au;
}

CompleteSet complete_set(const ClassSpec &spec, const std::vector<TemplateStage> &templates) {
  CompleteSet cs;
  cs.analysis = analyze(spec);
  const ClassAnalysis &a = cs.analysis;
  require_hypotheses(a);
  auto &recs = cs.records;
  recs = maximal_invariants(spec);
  GradientSolution sol = solve_gradient(a);
  for (auto &r : extra_invariants(a, sol))
    recs.push_back(std::move(r));
  for (auto &r : compatibility_invariants(a, sol))
    recs.push_back(std::move(r));

  IndexSet covered;
  if (!templates.empty()) {
    for (auto &r : upward_invariants_from_template(a, templates)) {
      if (r.target && a.is_interior(*r.target) && !covered.count(*r.target) &&
          is_structurally_upward(r.expression, *r.target, a))
        covered.insert(*r.target);
      recs.push_back(std::move(r));
    }
  }
  std::vector<std::future<InvariantRecord>> jobs;
  for (const auto &v : a.interior)
    if (!covered.count(v))
      jobs.push_back(std::async(std::launch::async,
                                [&a, v] { return upward_invariant_generic(a, v); }));
  for (auto &j : jobs)
    recs.push_back(j.get());
  cs.audit = audit(a, recs);
  return cs;
}

// ------------------------------------------------------------- recipes

std::pair<InvariantRecord, InvariantRecord>
decouple_pair(const InvariantRecord &first, const InvariantRecord &second, const JetExpr &alpha,
              const JetExpr &beta) {
  JetExpr det = JetExpr(1) - alpha * beta;
  if (det.is_zero())
    throw std::domain_error("decouple_pair: 1 - alpha*beta vanishes identically");
  auto make = [&](const InvariantRecord &base, const JetExpr &e) {
    InvariantRecord r = base;
    r.expression = e;
    r.label = base.label + "^s";
    r.representation.reset();
    add_assumptions(r.assumptions, first.assumptions);
    add_assumptions(r.assumptions, second.assumptions);
    add_assumptions(r.assumptions, assumption_factors(det));
    return r;
  };
  return {make(first, (first.expression + alpha * second.expression) / det),
          make(second, (second.expression + beta * first.expression) / det)};
}

JetExpr symmetric_hyperbolic_recipe(const JetExpr &i000, const JetExpr &icxz, const JetExpr &icyz,
                                    const JetExpr &i100, const JetExpr &i010, const JetExpr &i001) {
  const JetExpr third(Rational(1, 3));
  return i000 + icxz - third * icxz.derive(1) - third * icyz.derive(0) - i100 - i010 - i001 -
         JetExpr(1);
}

} // namespace lapinv

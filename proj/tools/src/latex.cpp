#include "lapinv/latex.hpp"

namespace lapinv {

namespace {

std::string derivative_suffix(const MultiIndex &d) {
  std::string s;
  for (std::size_t i = 0; i < d.dim(); ++i)
    for (int k = 0; k < d[i]; ++k)
      s += d.dim() <= 3 ? variable_name(i, d.dim()) : "x_" + std::to_string(i + 1);
  return s;
}

std::string latex_rational(const Rational &q) {
  if (q.get_den() == 1)
    return q.get_num().get_str();
  return "\\frac{" + q.get_num().get_str() + "}{" + q.get_den().get_str() + "}";
}

std::string latex_label(const std::string &label) {
  // I_c(x,y) -> I_{c}(x,y); I_{10} stays
  if (label.rfind("I_c(", 0) == 0)
    return "I_{c}" + label.substr(3);
  return label;
}

} // namespace

std::string latex_variable(VarId v) {
  const JetVariable &jv = var_info(v);
  const std::string d = derivative_suffix(jv.deriv);
  switch (jv.base.kind) {
  case SymbolKind::Coefficient:
    return "a_{" + jv.base.owner.compact() + d + "}";
  case SymbolKind::Gauge:
    return d.empty() ? "g" : "g_{" + d + "}";
  case SymbolKind::Parameter: {
    std::string name = jv.base.name;
    auto us = name.find('_');
    if (us != std::string::npos && us + 1 < name.size())
      name = name.substr(0, us) + "_{" + name.substr(us + 1) + "}";
    if (d.empty())
      return name;
    return (us != std::string::npos ? "(" + name + ")" : name) + "_{" + d + "}";
  }
  }
  return "?";
}

std::string latex(const Polynomial &p) {
  if (p.is_zero())
    return "0";
  std::string out;
  bool first = true;
  for (const auto *t : p.canonical_terms()) {
    const Rational &c = t->second;
    const Monomial &m = t->first;
    Rational mag = abs(c);
    out += c < 0 ? (first ? "-" : " - ") : (first ? "" : " + ");
    first = false;
    std::string body;
    for (const auto &[v, k] : m.factors()) {
      if (!body.empty())
        body += " ";
      body += latex_variable(v);
      if (k > 1)
        body += "^{" + std::to_string(k) + "}";
    }
    if (body.empty())
      out += latex_rational(mag);
    else if (mag == 1)
      out += body;
    else
      out += latex_rational(mag) + " " + body;
  }
  return out;
}

std::string latex(const JetExpr &e) {
  if (e.is_polynomial())
    return latex(e.num());
  return "\\frac{" + latex(e.num()) + "}{" + latex(e.den()) + "}";
}

std::string latex(const std::vector<InvariantRecord> &records) {
  std::string out = "\\begin{align*}\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto &r = records[i];
    out += "  " + latex_label(r.label) + " &= " + latex(r.expression);
    if (!r.assumptions.empty()) {
      out += " && \\text{(" + to_string(r.kind) + "; }";
      for (std::size_t k = 0; k < r.assumptions.size(); ++k)
        out += (k ? ",\\ " : "") + latex(r.assumptions[k]) + " \\neq 0";
      out += "\\text{)}";
    } else {
      out += " && \\text{(" + to_string(r.kind) + ")}";
    }
    out += i + 1 < records.size() ? " \\\\\n" : "\n";
  }
  return out + "\\end{align*}\n";
}

} // namespace lapinv

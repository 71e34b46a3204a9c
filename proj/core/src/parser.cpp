#include "lapinv/parser.hpp"

#include <cctype>

namespace lapinv {

namespace {

class ExprParser {
public:
  ExprParser(std::string_view text, std::size_t dim) : s_(text), dim_(dim) {}

  JetExpr parse() {
    JetExpr e = expr();
    skip();
    if (pos_ != s_.size())
      fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

  MultiIndex index_only() {
    MultiIndex m = int_list();
    skip();
    if (pos_ != s_.size())
      fail("trailing characters after multi-index");
    return m;
  }

private:
  [[noreturn]] void fail(const std::string &msg) const {
    throw ParseError("parse error at position " + std::to_string(pos_) + " in \"" +
                     std::string(s_) + "\": " + msg);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c))
      fail(std::string("expected '") + c + "'");
  }

  JetExpr expr() {
    JetExpr e = term();
    while (true) {
      if (accept('+'))
        e += term();
      else if (accept('-'))
        e -= term();
      else
        return e;
    }
  }

  JetExpr term() {
    JetExpr e = unary();
    while (true) {
      if (accept('*')) {
        e *= unary();
      } else if (accept('/')) {
        JetExpr d = unary();
        if (d.is_zero())
          fail("division by zero");
        e = e / d;
      } else {
        return e;
      }
    }
  }

  JetExpr unary() {
    if (accept('-'))
      return -unary();
    if (accept('+'))
      return unary();
    return power();
  }

  JetExpr power() {
    JetExpr base = atom();
    if (accept('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
      if (start == pos_)
        fail("expected nonnegative integer exponent");
      unsigned long k = std::stoul(std::string(s_.substr(start, pos_ - start)));
      if (k > 64)
        fail("exponent too large");
      return base.pow(static_cast<unsigned>(k));
    }
    return base;
  }

  JetExpr atom() {
    skip();
    if (pos_ >= s_.size())
      fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      JetExpr e = expr();
      expect(')');
      return e.derive(deriv());
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
      return JetExpr(Rational(mpz_class(std::string(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return jetvar();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string ident() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  MultiIndex int_list() {
    expect('[');
    std::vector<int> v;
    skip();
    if (!accept(']')) {
      do {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
          ++pos_;
        if (start == pos_)
          fail("expected nonnegative integer");
        v.push_back(std::stoi(std::string(s_.substr(start, pos_ - start))));
      } while (accept(','));
      expect(']');
    }
    return MultiIndex(std::move(v));
  }

  MultiIndex sized_list(const char *what) {
    MultiIndex m = int_list();
    if (m.dim() != dim_)
      fail(std::string(what) + " has length " + std::to_string(m.dim()) + ", expected " +
           std::to_string(dim_));
    return m;
  }

  MultiIndex deriv() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == ';') {
      ++pos_;
      return sized_list("derivative multi-index");
    }
    return MultiIndex(dim_);
  }

  JetExpr jetvar() {
    std::string name = ident();
    if (name == "a") {
      skip();
      if (pos_ >= s_.size() || s_[pos_] != '[')
        fail("coefficient symbol needs a multi-index, as in a[1,0]");
      MultiIndex owner = sized_list("coefficient multi-index");
      return coeff(owner, deriv());
    }
    if (name == "g")
      return gauge_symbol(deriv());
    if (name == "D")
      fail("'D' is reserved for derivative factors in templates");
    return param(name, deriv());
  }

  std::string_view s_;
  std::size_t dim_;
  std::size_t pos_ = 0;
};

} // namespace

JetExpr parse_expr(std::string_view text, std::size_t dim) {
  if (dim == 0)
    throw DimensionError("expression dimension must be positive");
  return ExprParser(text, dim).parse();
}

MultiIndex parse_multi_index(std::string_view text) { return ExprParser(text, 0).index_only(); }

bool is_valid_parameter_name(std::string_view name) {
  if (name.empty() || name == "a" || name == "g" || name == "D")
    return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
    return false;
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
      return false;
  return true;
}

} // namespace lapinv

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <thread>

#include "lapinv/jetexpr.hpp"
#include "lapinv/parser.hpp"

using namespace lapinv;

namespace {

JetExpr E2(const std::string &s) { return parse_expr(s, 2); }
JetExpr E3(const std::string &s) { return parse_expr(s, 3); }

} // namespace

TEST_CASE("field operations") {
  CHECK(E2("a[1,0] + a[1,0]") == E2("2*a[1,0]"));
  CHECK((E2("a[1,0] + a[1,0]")).to_string() == "2*a[1,0]");
  JetExpr p = param("p", 3);
  JetExpr extra = coeff({2, 2, 0}) / p - coeff({1, 1, 2}) / JetExpr(3);
  CHECK(extra == E3("(3*a[2,2,0] - p*a[1,1,2])/(3*p)"));
  JetExpr x = coeff({1, 0}), y = coeff({0, 1});
  CHECK((x / y) * (y / x) == JetExpr(1));
  CHECK(((x / y) * (y / x)).to_string() == "1");
  CHECK_THROWS_AS(x / JetExpr(0), std::domain_error);
  CHECK_THROWS_AS(x / (y - y), std::domain_error);
}

TEST_CASE("zero and normalization") {
  JetExpr z;
  CHECK(z.is_zero());
  CHECK(z.num().is_zero());
  CHECK(z.den().is_constant());
  CHECK(z.den().constant_value() == 1);
  JetExpr q = E2("(2*a[1,0])/(4*a[0,1])");
  CHECK(q.to_string() == "1/2*a[1,0]/a[0,1]");
  JetExpr r = E2("a[1,0]^2*a[0,1]/(a[1,0]*a[0,1]^3)");
  CHECK(r == E2("a[1,0]/a[0,1]^2"));
  CHECK(E2("(a[1,1]^2 - 1)/(a[1,1] - 1)").to_string() == "a[1,1] + 1");
}

TEST_CASE("derive") {
  CHECK(coeff({2, 0}).derive(0) == coeff({2, 0}, {1, 0}));
  CHECK(coeff({2, 0}).derive(0).to_string() == "a[2,0];[1,0]");
  JetExpr q = param("q", 2), r = param("r", 2);
  CHECK((q * r).derive(0) == q.derive(0) * r + q * r.derive(0));
  JetExpr a01 = coeff({0, 1}), a02 = coeff({0, 2});
  JetExpr lhs = (a01 / a02).derive(0);
  JetExpr rhs = (a01.derive(0) * a02 - a01 * a02.derive(0)) / a02.pow(2);
  CHECK(lhs == rhs);
  CHECK(JetExpr(5).derive(1).is_zero());
  CHECK(coeff({1, 0}).derive(MultiIndex{1, 2}) == coeff({1, 0}, {1, 2}));
}

TEST_CASE("equal by cross multiplication") {
  CHECK(equal(coeff({1, 0}), coeff({1, 0})));
  CHECK(equal(E2("(a[1,1]^2 - 1)/(a[1,1] - 1)"), E2("a[1,1] + 1")));
  CHECK_FALSE(equal(coeff({2, 0}, {1, 0}), coeff({0, 2}, {0, 1})));
  CHECK(equal(E2("1/(a[1,0] + 1) + 1/(a[1,0] - 1)"), E2("2*a[1,0]/(a[1,0]^2 - 1)")));
}

TEST_CASE("substitute") {
  JetExpr q = param("q", 2), r = param("r", 2);
  Bindings b{{BaseSymbol::parameter("q", 2), coeff({1, 1}) / JetExpr(2)}};
  CHECK(substitute(q.derive(0), b) == coeff({1, 1}, {1, 0}) / JetExpr(2));
  CHECK(substitute(q * r + r.derive(1), {}) == q * r + r.derive(1));
  Bindings br{{BaseSymbol::parameter("r", 2), coeff({2, 0})}};
  CHECK(substitute(q * r + r.derive(0), br) == q * coeff({2, 0}) + coeff({2, 0}, {1, 0}));
}

TEST_CASE("substitution closes chained bindings") {
  JetExpr q = param("q", 2), r = param("r", 2);
  Bindings b{{BaseSymbol::parameter("q", 2), r.derive(1) + JetExpr(1)},
             {BaseSymbol::parameter("r", 2), coeff({2, 0})}};
  CHECK(substitute(q.derive(0), b) == coeff({2, 0}, {1, 1}));
  Substituter s(b);
  CHECK(s(q * q) == (coeff({2, 0}, {0, 1}) + JetExpr(1)).pow(2));
}

TEST_CASE("cyclic bindings are rejected") {
  JetExpr q = param("q", 2), r = param("r", 2);
  Bindings self{{BaseSymbol::parameter("q", 2), q.derive(0) + JetExpr(1)}};
  CHECK_THROWS_AS(substitute(q, self), CyclicBindingError);
  Bindings loop{{BaseSymbol::parameter("q", 2), r}, {BaseSymbol::parameter("r", 2), q * q}};
  CHECK_THROWS_AS(substitute(q, loop), CyclicBindingError);
}

TEST_CASE("printing and parsing") {
  CHECK(E2("g;[0,2] - 3/2*p + a[1,0]*a[0,1];[1,0]").to_string() ==
        "a[1,0]*a[0,1];[1,0] + g;[0,2] - 3/2*p");
  CHECK(parse_expr("a[1,0,0];[0,1,0]", 3) == coeff({1, 0, 0}, {0, 1, 0}));
  CHECK(E2("(a[0,1]/a[0,2]);[1,0]") == (coeff({0, 1}) / coeff({0, 2})).derive(0));
  CHECK(E2("(p*q);[0,2]") == (param("p", 2) * param("q", 2)).derive(MultiIndex{0, 2}));
  CHECK_THROWS_AS(parse_expr("a", 2), ParseError);
  CHECK_THROWS_AS(parse_expr("a[1,0", 2), ParseError);
  CHECK_THROWS_AS(parse_expr("a[1,0,0]", 2), ParseError);
  CHECK_THROWS_AS(parse_expr("1/0", 2), ParseError);
  CHECK_THROWS_AS(parse_expr("p +", 2), ParseError);
}

TEST_CASE("variable order: coefficients, then gauge, then parameters") {
  JetExpr e = param("b", 2) + gauge_symbol(2) + coeff({0, 0});
  CHECK(e.to_string() == "a[0,0] + g + b");
}

TEST_CASE("interning is thread safe") {
  std::vector<std::thread> ts;
  std::vector<JetExpr> out(8);
  for (std::size_t k = 0; k < out.size(); ++k)
    ts.emplace_back([&out, k] {
      JetExpr e;
      for (int i = 0; i < 50; ++i)
        e += coeff({i % 5, static_cast<int>(k)}).derive(MultiIndex{i % 3, 1});
      out[k] = e;
    });
  for (auto &t : ts)
    t.join();
  for (std::size_t k = 0; k < out.size(); ++k) {
    JetExpr e;
    for (int i = 0; i < 50; ++i)
      e += coeff({i % 5, static_cast<int>(k)}).derive(MultiIndex{i % 3, 1});
    CHECK(out[k] == e);
  }
}

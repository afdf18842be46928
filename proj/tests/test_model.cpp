#include <gtest/gtest.h>

#include <random>

#include "sharpcheck/problem.hpp"

using namespace sharpcheck;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

ProblemInstance first_example() {
  return make_problem(2, "x2^2", {"x1^2 - 2*x1 + x2^2"}, BaseSet::interval(-0.75, 0), BaseSet::box({{0, 0.5}, {0, 0}}),
                      v2(0, 0));
}

std::string random_poly(std::mt19937_64& rng, int n, int terms, int max_deg) {
  std::uniform_int_distribution<int> var(1, n), deg(0, max_deg);
  std::uniform_real_distribution<double> coef(-2, 2);
  std::string s;
  for (int t = 0; t < terms; ++t) {
    s += (t ? " + " : "") + std::string("(") + std::to_string(coef(rng)) + ")";
    int left = max_deg;
    for (int k = 0; k < 2 && left > 0; ++k) {
      const int e = std::min(left, deg(rng));
      left -= e;
      s += "*x" + std::to_string(var(rng)) + "^" + std::to_string(e);
    }
  }
  return s;
}

}  // namespace

TEST(Parser, AcceptsGrammarAndDegree) {
  EXPECT_EQ(parse_expression("x1^2 - 2*x1 + x2^2", 2).degree(), 2);
  EXPECT_EQ(parse_expression("x2^2", 2).degree(), 2);
  const Polynomial p = parse_expression("-(x1 - 3)^3 * 2.5e-1 + --x2", 2);
  const Vec x = v2(1.5, -0.25);
  EXPECT_NEAR(p.value(x), -std::pow(1.5 - 3, 3) * 0.25 + (-0.25), 1e-14);
  EXPECT_EQ(parse_expression("x1^0", 1).degree(), 0);
}

TEST(Parser, ReportsErrorsWithPosition) {
  auto message = [](const std::string& text, long n) {
    try {
      parse_expression(text, n);
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message("x1^(1/2)", 1).find("fractional exponent"), std::string::npos);
  EXPECT_NE(message("x1^-1", 1).find("negative exponent"), std::string::npos);
  EXPECT_NE(message("x3 + 1", 2).find("unknown identifier 'x3'"), std::string::npos);
  EXPECT_NE(message("x1 + y", 2).find("position 6"), std::string::npos);
  EXPECT_NE(message("(x1 + 2", 2).find("expected ')'"), std::string::npos);
  EXPECT_NE(message("x1 / 2", 2).find("unexpected character '/'"), std::string::npos);
}

TEST(Jet, WorkedExampleValues) {
  const Jet2 g = evaluate_jet(parse_expression("x1^2 - 2*x1 + x2^2", 2), v2(0, 0));
  EXPECT_EQ(g.value(0), 0.0);
  EXPECT_EQ(g.jacobian(0, 0), -2.0);
  EXPECT_EQ(g.jacobian(0, 1), 0.0);
  EXPECT_TRUE(g.hessians[0].isApprox(2.0 * Mat::Identity(2, 2)));
  const Jet2 f = evaluate_jet(parse_expression("x2^2", 2), v2(0, 0));
  EXPECT_EQ(f.jacobian.norm(), 0.0);
  EXPECT_EQ(f.hessians[0](0, 0), 0.0);
  EXPECT_EQ(f.hessians[0](1, 1), 2.0);
  const Jet2 h = evaluate_jet({parse_expression("x1^2", 1), parse_expression("x1", 1)}, Vec::Zero(1));
  EXPECT_EQ(h.jacobian(0, 0), 0.0);
  EXPECT_EQ(h.jacobian(1, 0), 1.0);
  EXPECT_EQ(h.hessians[0](0, 0), 2.0);
  EXPECT_EQ(h.hessians[1](0, 0), 0.0);
}

TEST(Jet, FiniteDifferenceOracleOnRandomQuartics) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ud(-1, 1);
  for (int k = 0; k < 100; ++k) {
    const std::vector<Polynomial> ps = {parse_expression(random_poly(rng, 3, 5, 4), 3),
                                        parse_expression(random_poly(rng, 3, 4, 4), 3)};
    Vec x(3);
    x << ud(rng), ud(rng), ud(rng);
    const auto rep = derivative_check(ps, x);
    EXPECT_TRUE(rep.pass) << (rep.failures.empty() ? "" : rep.failures.front());
    const Jet2 j = evaluate_jet(ps, x);
    for (const auto& h : j.hessians) EXPECT_LE((h - h.transpose()).norm(), 1e-12);
  }
  EXPECT_TRUE(derivative_check({parse_expression("x1^2 - 2*x1 + x2^2", 2)}, v2(0.3, -0.2)).pass);
}

TEST(Jet, CorruptedJacobianIsCaught) {
  const std::vector<Polynomial> ps = {parse_expression("x1^2*x2", 2)};
  auto broken = [&](const Vec& x) {
    Jet2 j = evaluate_jet(ps, x);
    j.jacobian(0, 1) += 1e-3;
    return j;
  };
  const auto rep = derivative_check(broken, v2(0.5, 0.5));
  EXPECT_FALSE(rep.pass);
  ASSERT_FALSE(rep.failures.empty());
  EXPECT_NE(rep.failures.front().find("jacobian(0,1)"), std::string::npos);
}

TEST(Lagrangian, WorkedExamplesAndLinearity) {
  const ProblemInstance p1 = first_example();
  EXPECT_DOUBLE_EQ(lagrangian_jet(p1, v2(0, 0), Vec::Zero(1)).quadform(v2(0, 1)), 2.0);
  const BaseSet disks = BaseSet::union_of({BaseSet::ball(v2(1, 0), 1), BaseSet::ball(v2(-1, 0), 1)});
  const ProblemInstance p2 =
      make_problem(1, "-0.5*x1^2", {"x1^2", "x1"}, disks, BaseSet::point(Vec::Zero(1)),
                   Vec::Zero(1));
  EXPECT_DOUBLE_EQ(lagrangian_jet(p2, Vec::Zero(1), Vec::Zero(2)).quadform(Vec::Ones(1)), -1.0);
  // gradient at lam = 0 is grad f, quadform linear in lam
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  for (int k = 0; k < 20; ++k) {
    const Vec x = v2(nd(rng), nd(rng)), d = v2(nd(rng), nd(rng));
    const Vec a = Vec::Constant(1, nd(rng)), b = Vec::Constant(1, nd(rng));
    EXPECT_TRUE(lagrangian_jet(p1, x, Vec::Zero(1)).gradient.isApprox(p1.f.gradient(x)));
    const double qa = lagrangian_jet(p1, x, a).quadform(d), qb = lagrangian_jet(p1, x, b).quadform(d);
    const double q0 = lagrangian_jet(p1, x, Vec::Zero(1)).quadform(d);
    EXPECT_NEAR(lagrangian_jet(p1, x, a + b).quadform(d), qa + qb - q0, 1e-10);
  }
}

TEST(Problem, ValidatesFeasibilityAndDimensions) {
  EXPECT_NO_THROW(first_example());
  try {
    make_problem(1, "x1", {"x1"}, BaseSet::interval(-1, 0), BaseSet::point(Vec::Ones(1)), Vec::Ones(1));
    FAIL();
  } catch (const InputError& e) {
    EXPECT_STREQ(e.what(), "candidate infeasible");
  }
  EXPECT_THROW(make_problem(2, "x1", {"x1"}, BaseSet::interval(-1, 0), BaseSet::point(Vec::Zero(1)), Vec::Zero(2)),
               DimensionError);
}

TEST(Neighborhood, DirectionalCone) {
  EXPECT_TRUE(in_directional_neighborhood(v2(0.1, 0.01), v2(1, 0), 0.5, 0.25));
  EXPECT_FALSE(in_directional_neighborhood(v2(0.0, 0.1), v2(1, 0), 0.5, 0.25));
  EXPECT_FALSE(in_directional_neighborhood(v2(1, 0), v2(1, 0), 0.5, 0.25));
  EXPECT_TRUE(in_directional_neighborhood(v2(-0.1, 0.1), v2(0, 0), 0.5, 0.25));
}

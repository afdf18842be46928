#include <gtest/gtest.h>

#include <random>

#include "sharpcheck/certify.hpp"

using namespace sharpcheck;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

Vec v1(double a) { return Vec::Constant(1, a); }
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

ProblemInstance first_example() {
  return make_problem(2, "x2^2", {"x1^2 - 2*x1 + x2^2"}, BaseSet::interval(-0.75, 0), BaseSet::box({{0, 0.5}, {0, 0}}),
                      v2(0, 0));
}

ProblemInstance second_example() {
  return make_problem(1, "-0.5*x1^2", {"x1^2", "x1"},
                      BaseSet::union_of({BaseSet::ball(v2(1, 0), 1), BaseSet::ball(v2(-1, 0), 1)}),
                      BaseSet::point(v1(0)), v1(0));
}

ProblemInstance parabola() {
  return make_problem(2, "x2", {"x1^2 - x2"}, BaseSet::interval(-kInf, 0), BaseSet::point(v2(0, 0)), v2(0, 0));
}

Region halfplane_ge(double offset) {  // {w : w1 >= offset}
  return Region::from_cell(PolyCell::all_space(2).add_ineq(-linalg::unit(2, 0), -offset), offset == 0.0);
}

const Witness& find(const CertificationReport& r, const std::string& kind) {
  for (const auto& w : r.witnesses)
    if (w.inequality == kind) return w;
  throw std::runtime_error("missing witness " + kind);
}

/// Random polyhedral instance with affine-plus-quadratic g, an orthant K active at xbar and a multiplier in N_K.
ProblemInstance random_orthant_instance(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(0.2, 1.5);
  const long n = 3, m = 2;
  std::vector<std::string> g;
  Mat a(m, n);
  for (long i = 0; i < m; ++i) {
    std::string e;
    for (long j = 0; j < n; ++j) {
      a(i, j) = std::round(nd(rng) * 4) / 4;
      e += (j ? " + " : "") + std::to_string(a(i, j)) + "*x" + std::to_string(j + 1);
    }
    e += " + " + std::to_string(std::round(nd(rng) * 4) / 4) + "*x1*x2";
    g.push_back(e);
  }
  Vec lam(m);
  for (long i = 0; i < m; ++i) lam(i) = std::round(ud(rng) * 4) / 4;
  const Vec c = -a.transpose() * lam;
  std::string f;
  for (long j = 0; j < n; ++j) f += (j ? " + " : "") + std::to_string(c(j)) + "*x" + std::to_string(j + 1);
  f += " + x1^2 + x2^2 + x3^2";
  return make_problem(n, f, g, BaseSet::box({{-kInf, 0}, {-kInf, 0}}), BaseSet::point(Vec::Zero(n)),
                      Vec::Zero(n));
}

}  // namespace

TEST(Multipliers, AffineSetExamples) {
  const auto ex1 = multiplier_affine_set(first_example(), v2(0, 0));
  EXPECT_FALSE(ex1.empty);
  EXPECT_EQ(ex1.basis.cols(), 0);
  EXPECT_NEAR(ex1.lam0.norm(), 0.0, 1e-12);
  const auto ex2 = multiplier_affine_set(second_example(), v1(0));
  ASSERT_EQ(ex2.basis.cols(), 1);
  EXPECT_NEAR(std::abs(ex2.basis(0, 0)), 1.0, 1e-12);
  EXPECT_NEAR(ex2.lam0(1), 0.0, 1e-12);
  const auto none = multiplier_affine_set(
      make_problem(1, "x1", {"0"}, BaseSet::interval(-kInf, kInf), BaseSet::point(v1(0)), v1(0)), v1(0));
  EXPECT_TRUE(none.empty);
}

TEST(Multipliers, ResidualInvariant) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (int k = 0; k < 20; ++k) {
    const auto p = random_orthant_instance(rng);
    const auto a = multiplier_affine_set(p, p.xbar);
    ASSERT_FALSE(a.empty);
    const Mat jt = p.g_jet(p.xbar).jacobian.transpose();
    for (int s = 0; s < 5; ++s) {
      Vec lam = a.lam0;
      for (long j = 0; j < a.basis.cols(); ++j) lam += nd(rng) * a.basis.col(j);
      EXPECT_LE((p.f.gradient(p.xbar) + jt * lam).norm(), 1e-9);
    }
  }
}

TEST(Multipliers, DirectionalExamplesAndMonotonicity) {
  const Region axis = Region::from_cell(PolyCell::all_space(2).add_eq(linalg::unit(2, 1), 0.0), false);
  for (auto kind : {DirectionalKind::limiting, DirectionalKind::clarke})
    EXPECT_TRUE(regions_equal(directional_multipliers(second_example(), v1(0), v1(1), kind), axis));
  const Region m1 = directional_multipliers(first_example(), v2(0, 0), v2(0, 1), DirectionalKind::limiting);
  EXPECT_TRUE(regions_equal(m1, Region::origin(1)));
  std::mt19937_64 rng(5);
  for (int k = 0; k < 15; ++k) {
    const auto p = random_orthant_instance(rng);
    for (const Vec& d : direction_mesh(critical_cone(p, p.xbar), 1)) {
      const Region m = directional_multipliers(p, p.xbar, d, DirectionalKind::limiting);
      const Region c = directional_multipliers(p, p.xbar, d, DirectionalKind::clarke);
      EXPECT_TRUE(region_subset_of(m, c));
      break;
    }
  }
}

TEST(CriticalCone, Examples) {
  const Region c1 = critical_cone(first_example(), v2(0, 0));
  EXPECT_TRUE(regions_equal(c1, halfplane_ge(0)));
  EXPECT_TRUE(region_contains(c1, v2(1, 1)));
  EXPECT_TRUE(regions_equal(critical_cone(second_example(), v1(0)), Region::all_space(1)));
  const auto flat = make_problem(2, "x1^2 + x2^2", {"0"}, BaseSet::interval(-kInf, kInf), BaseSet::point(v2(0, 0)),
                                 v2(0, 0));
  EXPECT_TRUE(regions_equal(critical_cone(flat, v2(0, 0)), Region::all_space(2)));
  const Region cp = critical_cone(parabola(), v2(0, 0));
  const Region line = Region::from_cell(PolyCell::all_space(2).add_eq(linalg::unit(2, 1), 0.0), true);
  EXPECT_TRUE(regions_equal(cp, line));
  EXPECT_THROW(critical_cone(first_example(), v2(3, 3)), DomainError);
}

TEST(ConstraintQualifications, Examples) {
  const auto p = first_example();
  for (auto k : {CqKind::foscms, CqKind::soscms, CqKind::dirrcq, CqKind::nondeg})
    EXPECT_TRUE(constraint_qualification_check(p, v2(0, 0), v2(0, 1), k).holds) << to_string(k);
  const auto zero = make_problem(1, "x1^2", {"0"}, BaseSet::point(v1(0)), BaseSet::point(v1(0)), v1(0));
  const auto r = constraint_qualification_check(zero, v1(0), v1(1), CqKind::foscms);
  EXPECT_FALSE(r.holds);
  EXPECT_GT(r.witness.norm(), 0.0);
  EXPECT_THROW(constraint_qualification_check(second_example(), v1(0), v1(1), CqKind::soscms), DomainError);
  EXPECT_FALSE(constraint_qualification_check(second_example(), v1(0), v1(1), CqKind::foscms).holds);
  EXPECT_EQ(mscq_certificate(second_example(), v1(0), v1(1)).value_or(""), "sampled-feasible-neighborhood");
}

TEST(Linearization, WorkedExamples) {
  const auto p = first_example();
  const Region t2 = linearized_phi_tangents(p, v2(0, 0), v2(0, 1), OracleKind::outer2);
  const Region tpp = linearized_phi_tangents(p, v2(0, 0), v2(0, 1), OracleKind::asymp2);
  EXPECT_TRUE(regions_equal(t2, halfplane_ge(1)));
  EXPECT_TRUE(regions_equal(tpp, halfplane_ge(0)));
  EXPECT_FALSE(t2.has_note(kInclusionOnly));
  EXPECT_TRUE(regions_equal(linearized_phi_tangents(second_example(), v1(0), v1(1), OracleKind::outer2),
                            Region::all_space(1)));
  EXPECT_TRUE(linearized_phi_tangents(p, v2(0, 0), v2(0, 1), OracleKind::outer2, Level::level_set)
                  .has_note(kInclusionOnly));
}

TEST(Linearization, AdjointIdentity) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int k = 0; k < 40; ++k) {
    // random bounded-or-not polygon in R^2 and random M: R^2 -> R^3
    PolyCell c = PolyCell::all_space(2);
    for (int r = 0; r < 4; ++r) c.add_ineq(v2(nd(rng), nd(rng)), 1.0 + std::abs(nd(rng)));
    if (cell_is_empty(c)) continue;
    Mat m(3, 2);
    for (long i = 0; i < 3; ++i)
      for (long j = 0; j < 2; ++j) m(i, j) = nd(rng);
    Vec lam(3);
    lam << nd(rng), nd(rng), nd(rng);
    // image support from generators: max over mapped vertices, +inf along any ascending mapped ray or line
    const Generators g = generators_of(c);
    double img = -kInf;
    for (const auto& v : g.vertices) img = std::max(img, lam.dot(m * v));
    for (const auto& r : g.rays)
      if (lam.dot(m * r) > 1e-12) img = kInf;
    for (const auto& l : g.lines)
      if (std::abs(lam.dot(m * l)) > 1e-12) img = kInf;
    const double adj = support(Region::from_cell(c, false), m.transpose() * lam).value();
    if (std::isinf(img)) {
      EXPECT_TRUE(std::isinf(adj));
    } else {
      EXPECT_NEAR(adj, img, 1e-8 * std::max(1.0, std::abs(img)));
    }
  }
}

TEST(Implicit, FirstExampleBothModes) {
  const auto p = first_example();
  const auto r = necessary_implicit_check(p, v2(0, 0), v2(0, 1), 0.0, NecessaryMode::proximal);
  EXPECT_EQ(r.verdict, Verdict::satisfied);
  ASSERT_TRUE(r.kappa_bound);
  EXPECT_NEAR(*r.kappa_bound, 1.0, 1e-6);
  EXPECT_NEAR(find(r, "implicit-i").achieved, 0.0, 1e-12);
  EXPECT_NEAR(find(r, "implicit-ii").achieved, 2.0, 1e-9);
  const auto t = necessary_implicit_check(p, v2(0, 0), v2(1, 1), 0.0, NecessaryMode::tangent_distance);
  EXPECT_EQ(t.verdict, Verdict::satisfied);
  EXPECT_NEAR(*t.kappa_bound, 1.0, 1e-6);
  EXPECT_TRUE(witnesses_replay(p, r));
  EXPECT_TRUE(witnesses_replay(p, t));
  // eps shrinks the right-hand side by (1 - 2 eps)^2
  const auto e = necessary_implicit_check(p, v2(0, 0), v2(0, 1), 0.25, NecessaryMode::proximal);
  EXPECT_NEAR(*e.kappa_bound, 4.0, 1e-6);
}

TEST(Implicit, SecondExampleRejected) {
  const auto p = second_example();
  const auto r = necessary_implicit_check(p, v1(0), v1(1), 0.0, NecessaryMode::proximal);
  EXPECT_EQ(r.verdict, Verdict::violated);
  ASSERT_FALSE(r.witnesses.empty());
  EXPECT_EQ(r.witnesses.front().inequality, "implicit-ii");
  EXPECT_NEAR(r.witnesses.front().lam.norm(), 0.0, 1e-12);
  EXPECT_NEAR(r.witnesses.front().achieved, -1.0, 1e-9);
  EXPECT_TRUE(witnesses_replay(p, r));
}

TEST(Implicit, PreconditionsReported) {
  const auto p = first_example();
  EXPECT_EQ(necessary_implicit_check(p, v2(0, 0), v2(-1, 0), 0.0, NecessaryMode::proximal).verdict,
            Verdict::hypotheses_not_met);  // not critical
  EXPECT_EQ(necessary_implicit_check(p, v2(0, 0), v2(1, 1), 0.0, NecessaryMode::proximal).verdict,
            Verdict::hypotheses_not_met);  // not a proximal normal
  EXPECT_EQ(necessary_implicit_check(p, v2(0.3, 0), v2(0, 1), 0.0, NecessaryMode::proximal).verdict,
            Verdict::hypotheses_not_met);  // outside B_delta
}

TEST(Explicit, Examples) {
  const auto q = second_example();
  const auto r = necessary_explicit_check(q, v1(0), v1(1), 0.0);
  EXPECT_EQ(r.verdict, Verdict::satisfied);
  EXPECT_TRUE(r.strength_gap);
  EXPECT_NEAR(find(r, "explicit-i").lam.norm(), 0.0, 1e-12);
  EXPECT_NEAR(find(r, "explicit-i").achieved, 0.0, 1e-12);
  const auto& wii = find(r, "explicit-ii");
  EXPECT_NEAR((wii.lam - v2(1, 0)).norm(), 0.0, 1e-12);
  EXPECT_NEAR(wii.achieved, 2.0, 1e-9);
  EXPECT_NEAR(*r.kappa_bound, 1.0, 1e-9);
  EXPECT_TRUE(witnesses_replay(q, r));
  const auto p = first_example();
  const auto r1 = necessary_explicit_check(p, v2(0, 0), v2(0, 1), 0.0);
  EXPECT_EQ(r1.verdict, Verdict::satisfied);
  EXPECT_NEAR(*r1.kappa_bound, 1.0, 1e-9);
  EXPECT_FALSE(r1.strength_gap);
  // affine g with polyhedral K certifies MSCQ; the M-multiplier set is empty
  const auto lin = make_problem(1, "x1", {"x1"}, BaseSet::interval(-kInf, 0), BaseSet::point(v1(0)), v1(0));
  EXPECT_EQ(necessary_explicit_check(lin, v1(0), v1(-1), 0.0).verdict, Verdict::violated);
}

TEST(Clarke, FirstExampleAllModes) {
  const auto p = first_example();
  const auto e = necessary_clarke_check(p, v2(0, 0), v2(0, 1), 0.0, ClarkeMode::elementwise);
  EXPECT_EQ(e.verdict, Verdict::satisfied);
  EXPECT_NEAR(*e.kappa_bound, 1.0, 1e-9);
  const auto& w = find(e, "clarke-ii");
  EXPECT_NEAR(w.w(0), -1.0, 1e-12);
  EXPECT_NEAR(w.achieved, 2.0, 1e-9);
  ASSERT_FALSE(e.duality.empty());
  for (const auto& rec : e.duality) EXPECT_NEAR(rec.primal, rec.dual, 1e-6) << rec.element;
  const auto c = necessary_clarke_check(p, v2(0, 0), v2(0, 1), 0.0, ClarkeMode::convex_subset);
  EXPECT_EQ(c.verdict, Verdict::satisfied);
  EXPECT_NEAR(*c.kappa_bound, 1.0, 1e-9);
  const auto nd = necessary_clarke_check(p, v2(0, 0), v2(0, 1), 0.0, ClarkeMode::nondegenerate);
  EXPECT_EQ(nd.verdict, Verdict::satisfied);
  EXPECT_NEAR(find(nd, "nondegenerate-i").lam.norm(), 0.0, 1e-12);
  EXPECT_NEAR(find(nd, "nondegenerate-i").achieved, 0.0, 1e-12);
  EXPECT_NEAR(*nd.kappa_bound, 1.0, 1e-9);
  for (const auto* r : {&e, &c, &nd}) EXPECT_TRUE(witnesses_replay(p, *r)) << r->check;
  EXPECT_EQ(necessary_clarke_check(second_example(), v1(0), v1(1), 0.0, ClarkeMode::elementwise).verdict,
            Verdict::hypotheses_not_met);
}

TEST(Clarke, StrongDualityOnRandomInstances) {
  std::mt19937_64 rng(21);
  int instances = 0;
  for (int k = 0; k < 60 && instances < 25; ++k) {
    const auto p = random_orthant_instance(rng);
    const auto mesh = direction_mesh(critical_cone(p, p.xbar), 7);
    if (mesh.empty()) continue;
    const Vec d = mesh[mesh.size() / 2];
    if (!constraint_qualification_check(p, p.xbar, d, CqKind::dirrcq).holds) continue;
    const auto r = necessary_clarke_check(p, p.xbar, d, 0.0, ClarkeMode::elementwise);
    ASSERT_NE(r.verdict, Verdict::hypotheses_not_met) << r.diagnostics.front();
    ASSERT_FALSE(r.duality.empty());
    for (const auto& rec : r.duality) EXPECT_NEAR(rec.primal, rec.dual, 1e-6) << rec.element;
    EXPECT_TRUE(witnesses_replay(p, r));
    ++instances;
  }
  EXPECT_GE(instances, 20);
}

TEST(Sufficient, ParabolaThresholds) {
  const auto p = parabola();
  for (auto mode : {SufficientMode::region_side, SufficientMode::k_side}) {
    const auto r = sufficient_point_check(p, 0.9, mode);
    EXPECT_EQ(r.verdict, Verdict::certified) << to_string(mode);
    EXPECT_NEAR(find(r, "sufficient-i").lam(0), 1.0, 1e-12);
    EXPECT_NEAR(find(r, mode == SufficientMode::region_side ? "sufficient-ii-region" : "sufficient-ii-k").achieved,
                2.0, 1e-9);
    EXPECT_TRUE(witnesses_replay(p, r));
  }
  EXPECT_EQ(sufficient_point_check(p, 1.5, SufficientMode::region_side).verdict, Verdict::hypotheses_not_met);
  SufficientOptions literal;
  literal.literal_threshold = true;
  const auto lit = sufficient_point_check(p, 1.5, SufficientMode::region_side, literal);
  EXPECT_EQ(lit.verdict, Verdict::violated);
  EXPECT_LT(find(lit, "growth").achieved, 1.45);
  SufficientOptions strict;
  strict.strict_criticality = true;
  EXPECT_EQ(sufficient_point_check(p, 0.9, SufficientMode::region_side, strict).verdict,
            Verdict::hypotheses_not_met);
}

TEST(Sufficient, SegmentExampleNotMet) {
  const auto r = sufficient_point_check(first_example(), 0.9, SufficientMode::region_side);
  EXPECT_EQ(r.verdict, Verdict::hypotheses_not_met);
  EXPECT_THROW(sufficient_point_check(first_example(), 0.0, SufficientMode::region_side), InputError);
}

TEST(Sufficient, IsolatedExamples) {
  const auto r = sufficient_isolated_check(parabola());
  EXPECT_EQ(r.verdict, Verdict::certified);
  EXPECT_NEAR(find(r, "sufficient-i").lam(0), 1.0, 1e-12);
  EXPECT_TRUE(witnesses_replay(parabola(), r));
  const auto q = sufficient_isolated_check(second_example());
  EXPECT_EQ(q.verdict, Verdict::hypotheses_not_met);
  EXPECT_NEAR(find(q, "sufficient-ii-region").achieved, -1.0, 1e-9);
  const auto sq = make_problem(1, "x1^2", {"0"}, BaseSet::interval(-kInf, kInf), BaseSet::point(v1(0)), v1(0));
  const auto s = sufficient_isolated_check(sq);
  EXPECT_EQ(s.verdict, Verdict::certified);
  EXPECT_NEAR(find(s, "sufficient-ii-region").lam.norm(), 0.0, 1e-12);
  EXPECT_THROW(sufficient_isolated_check(first_example()), DomainError);
}

TEST(Sweep, Examples) {
  const auto r = sweep_necessary(first_example(), 0.0, NecessaryMode::proximal);
  EXPECT_EQ(r.verdict, Verdict::satisfied);
  EXPECT_NEAR(*r.kappa_bound, 1.0, 1e-6);
  const auto q = sweep_necessary(second_example(), 0.0, NecessaryMode::proximal);
  EXPECT_EQ(q.verdict, Verdict::violated);
  EXPECT_NEAR(std::abs(q.witnesses.front().d(0)), 1.0, 1e-12);
  // no admissible direction: f strictly increasing away from the interior of K is never critical
  const auto v = make_problem(1, "x1", {"x1"}, BaseSet::interval(0, kInf), BaseSet::point(v1(0)), v1(0));
  const auto s = sweep_necessary(v, 0.0, NecessaryMode::proximal);
  EXPECT_EQ(s.verdict, Verdict::satisfied);
}

TEST(Invariants, OrderingAndConsistency) {
  const auto p = parabola();
  const auto suf = sufficient_point_check(p, 0.9, SufficientMode::region_side);
  ASSERT_EQ(suf.verdict, Verdict::certified);
  const double khat = growth_constant_estimate(p, p.options.delta, 4000, 42).kappa_hat;
  const auto nec = sweep_necessary(p, 0.0, NecessaryMode::proximal);
  ASSERT_EQ(nec.verdict, Verdict::satisfied);
  EXPECT_LE(*suf.kappa_bound, khat + 0.05);
  EXPECT_LE(khat, *nec.kappa_bound + 0.05);
  EXPECT_GE(khat, *suf.kappa_bound - 0.05);
}

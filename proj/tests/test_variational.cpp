#include <gtest/gtest.h>

#include <random>

#include "sharpcheck/variational.hpp"

using namespace sharpcheck;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

BaseSet two_disks() { return BaseSet::union_of({BaseSet::ball(v2(1, 0), 1), BaseSet::ball(v2(-1, 0), 1)}); }

Region halfplane(double a, double b, double off) {
  PolyCell c = PolyCell::all_space(2);
  c.add_ineq(v2(a, b), off);
  return Region::from_cell(c, off == 0.0);
}

Region line_through(double a, double b) {  // {v : (a,b) . v = 0}
  PolyCell c = PolyCell::all_space(2);
  c.add_eq(v2(a, b), 0);
  return Region::from_cell(c, true);
}

const BaseSet kInterval = BaseSet::interval(-0.75, 0.0);

bool cone_law_holds(const Region& r, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  for (int s = 0; s < 200; ++s) {
    Vec w(r.dim);
    for (long i = 0; i < r.dim; ++i) w(i) = 3 * nd(rng);
    if (!region_contains(r, w)) continue;
    for (double a : {0.0, 0.5, 2.0, 10.0})
      if (!region_contains(r, a * w, 1e-7)) return false;
  }
  return true;
}

}  // namespace

TEST(Membership, CatalogExamples) {
  EXPECT_TRUE(membership(kInterval, v1(0)));
  EXPECT_FALSE(membership(two_disks(), v2(0, 0.1)));
  EXPECT_TRUE(membership(BaseSet::ball(v2(0, 0), 1), v2(1, 0)));
  EXPECT_THROW(membership(kInterval, v2(0, 0)), DimensionError);
  const BaseSet prod = BaseSet::product({kInterval, BaseSet::finite({v1(1), v1(2)})});
  EXPECT_TRUE(membership(prod, v2(-0.5, 2)));
  EXPECT_FALSE(membership(prod, v2(-0.5, 1.5)));
}

TEST(Distance, CatalogExamples) {
  auto r = exact_distance(kInterval, v1(0.5));
  EXPECT_NEAR(r.distance, 0.5, 1e-15);
  ASSERT_EQ(r.projections.size(), 1u);
  EXPECT_NEAR(r.projections[0](0), 0.0, 1e-15);
  const BaseSet right = BaseSet::halfspace(v2(-1, 0), -1);
  r = exact_distance(right, v2(0, 0));
  EXPECT_NEAR(r.distance, 1.0, 1e-12);
  const BaseSet both = BaseSet::union_of({right, BaseSet::halfspace(v2(1, 0), -1)});
  r = exact_distance(both, v2(0.2, 0));
  EXPECT_NEAR(r.distance, 0.8, 1e-12);
  ASSERT_EQ(r.projections.size(), 1u);
  EXPECT_NEAR(r.projections[0](0), 1.0, 1e-12);
  // equidistant point reports both projections
  EXPECT_EQ(exact_distance(both, v2(0, 3)).projections.size(), 2u);
}

TEST(Distance, MatchesSamplingOracle) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ud(-3, 3);
  const BaseSet s = BaseSet::union_of({BaseSet::ball(v2(1, 1), 0.5),
                                        BaseSet::polyhedron(2, {{v2(1, 1), 1}, {v2(-1, 0), 1}, {v2(0, -1), 2}}, {})});
  // oracle: dense boundary-inclusive grid of members
  std::vector<Vec> members;
  for (double a = -3; a <= 3; a += 0.01)
    for (double b = -3; b <= 3; b += 0.01)
      if (membership(s, v2(a, b))) members.push_back(v2(a, b));
  for (int k = 0; k < 10; ++k) {
    const Vec y = v2(ud(rng), ud(rng));
    double best = 1e300;
    for (const auto& m : members) best = std::min(best, (m - y).norm());
    const double d = exact_distance(s, y).distance;
    EXPECT_LE(d, best + 1e-12);
    EXPECT_NEAR(d, best, 0.01);
  }
}

TEST(Tangent, CatalogExamples) {
  const Region t = tangent_cone(kInterval, v1(0));
  EXPECT_TRUE(region_contains(t, v1(-5)));
  EXPECT_FALSE(region_contains(t, v1(1e-3)));
  const Region u = tangent_cone(two_disks(), v2(0, 0));
  EXPECT_TRUE(regions_equal(u, Region::all_space(2)));
  EXPECT_TRUE(u.has_note(kVerifyByOracle));
  const BaseSet box = BaseSet::box({{0, 1}, {0, 1}});
  EXPECT_TRUE(regions_equal(tangent_cone(box, v2(0.5, 0.5)), Region::all_space(2)));
  EXPECT_THROW(tangent_cone(kInterval, v1(1)), DomainError);
}

TEST(SecondTangent, CatalogExamples) {
  const BaseSet disk = BaseSet::ball(v2(0, 0), 1);
  EXPECT_TRUE(regions_equal(second_tangent(disk, v2(1, 0), v2(0, 1), SecondOrderKind::outer), halfplane(1, 0, -1)));
  // union of disks: per-member curvature halfspaces
  Region expect = halfplane(-1, 0, -1);
  expect.cells.push_back(halfplane(1, 0, -1).cells.front());
  const Region outer = second_tangent(two_disks(), v2(0, 0), v2(0, 1), SecondOrderKind::outer);
  EXPECT_TRUE(regions_equal(outer, expect));
  EXPECT_FALSE(outer.cone);
  const Region asym = second_tangent(two_disks(), v2(0, 0), v2(0, 1), SecondOrderKind::asymptotic);
  EXPECT_TRUE(regions_equal(asym, Region::all_space(2)));
  EXPECT_TRUE(asym.cone);
  // non-tangent direction: empty with diagnostic
  const Region none = second_tangent(disk, v2(1, 0), v2(1, 0), SecondOrderKind::outer);
  EXPECT_TRUE(region_is_empty(none));
  EXPECT_TRUE(none.has_note(kNotTangent));
}

TEST(SecondTangent, ZeroDirectionReducesToTangentCone) {
  const std::vector<std::pair<BaseSet, Vec>> cases = {
      {kInterval, v1(0)},
      {two_disks(), v2(0, 0)},
      {BaseSet::ball(v2(0, 0), 2), v2(0, 2)},
      {BaseSet::polyhedron(2, {{v2(1, 1), 1}, {v2(-1, 0), 0}}, {}), v2(0, 1)},
      {BaseSet::product({kInterval, BaseSet::interval(0, 1)}), v2(0, 0)}};
  for (const auto& [s, y] : cases) {
    EXPECT_TRUE(regions_equal(second_tangent(s, y, Vec::Zero(s.dim), SecondOrderKind::outer), tangent_cone(s, y)));
    EXPECT_TRUE(regions_equal(directional_normal(s, y, Vec::Zero(s.dim), DirectionalKind::limiting),
                              normal_cone(s, y, NormalKind::limiting)));
  }
}

TEST(Normals, CatalogExamples) {
  const Region f = normal_cone(kInterval, v1(0), NormalKind::frechet);
  EXPECT_TRUE(region_contains(f, v1(3)));
  EXPECT_FALSE(region_contains(f, v1(-1e-3)));
  EXPECT_TRUE(cone_is_trivial(normal_cone(two_disks(), v2(0, 0), NormalKind::frechet)));
  EXPECT_TRUE(cone_is_trivial(normal_cone(two_disks(), v2(0, 0), NormalKind::proximal)));
  const Region lim = normal_cone(two_disks(), v2(0, 0), NormalKind::limiting);
  EXPECT_TRUE(regions_equal(lim, line_through(0, 1)));
}

TEST(Normals, DirectionalCatalogExamples) {
  const Region n0 = directional_normal(kInterval, v1(0), v1(0), DirectionalKind::limiting);
  EXPECT_TRUE(regions_equal(n0, normal_cone(kInterval, v1(0), NormalKind::limiting)));
  EXPECT_TRUE(cone_is_trivial(directional_normal(kInterval, v1(0), v1(-1), DirectionalKind::limiting)));
  const Region nl = directional_normal(two_disks(), v2(0, 0), v2(0, 1), DirectionalKind::limiting);
  EXPECT_TRUE(regions_equal(nl, line_through(0, 1)));
  const Region nc = directional_normal(two_disks(), v2(0, 0), v2(0, 1), DirectionalKind::clarke);
  EXPECT_TRUE(regions_equal(nc, line_through(0, 1)));
  EXPECT_TRUE(regions_equal(directional_clarke_tangent(two_disks(), v2(0, 0), v2(0, 1)), line_through(1, 0)));
  EXPECT_TRUE(regions_equal(directional_clarke_tangent(kInterval, v1(0), v1(-1)), Region::all_space(1)));
  // non-tangent direction gives the empty cone
  EXPECT_TRUE(region_is_empty(directional_normal(kInterval, v1(0), v1(1), DirectionalKind::limiting)));
}

TEST(Normals, EpsProximal) {
  const BaseSet seg = BaseSet::box({{0, 0.5}, {0, 0}});
  EXPECT_TRUE(eps_proximal_membership(seg, v2(0, 0), v2(0, 1), 0));
  EXPECT_FALSE(eps_proximal_membership(seg, v2(0, 0), v2(1, 0), 0));
  EXPECT_TRUE(eps_proximal_membership(seg, v2(0, 0), v2(0, 0), 0.3));
  // (1, 1) is at distance 1 from {v1 <= 0} and has norm sqrt 2
  EXPECT_TRUE(eps_proximal_membership(seg, v2(0, 0), v2(1, 1), 0.71));
  EXPECT_FALSE(eps_proximal_membership(seg, v2(0, 0), v2(1, 1), 0.7));
  EXPECT_THROW(eps_proximal_membership(seg, v2(0, 0), v2(0, 1), 1.0), DomainError);
  EXPECT_THROW(eps_proximal_membership(seg, v2(1, 0), v2(0, 1), 0.0), DomainError);
}

TEST(Properties, PolarityConeLawAndConvexIdentities) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 25; ++trial) {
    // random convex polygon through the origin with the origin on its boundary
    std::vector<LinRow> rows;
    rows.push_back({v2(nd(rng), nd(rng)), 0.0});
    for (int k = 0; k < 3; ++k) rows.push_back({v2(nd(rng), nd(rng)), std::abs(nd(rng)) + 0.1});
    const BaseSet s = BaseSet::polyhedron(2, rows, {});
    const Vec y = Vec::Zero(2);
    const Region t = tangent_cone(s, y);
    EXPECT_TRUE(regions_equal(normal_cone(s, y, NormalKind::frechet), polar_cone(t)));
    EXPECT_TRUE(regions_equal(normal_cone(s, y, NormalKind::proximal), normal_cone(s, y, NormalKind::frechet)));
    EXPECT_TRUE(cone_law_holds(normal_cone(s, y, NormalKind::limiting), rng));
    // tangent direction sampled from the cone
    Vec d;
    do d = v2(nd(rng), nd(rng));
    while (!region_contains(t, d));
    const Region t2 = second_tangent(s, y, d, SecondOrderKind::outer);
    const Region tpp = second_tangent(s, y, d, SecondOrderKind::asymptotic);
    EXPECT_TRUE(cone_law_holds(tpp, rng));
    EXPECT_TRUE(region_subset_of(t2, tpp));
    // T'' = cl cone(T - d) for convex sets
    const Region cone_td = cone_hull(Region::from_cell(cell_from_generators(2, [&] {
      Generators g = generators_of(t.cells.front());
      Generators h;
      h.vertices = {Vec::Zero(2)};
      h.rays = g.rays;
      h.lines = g.lines;
      h.rays.push_back(-d.normalized());
      return h;
    }()), true));
    EXPECT_TRUE(regions_equal(tpp, cone_td));
    // directional limiting normal = N ∩ d^⊥
    EXPECT_TRUE(regions_equal(directional_normal(s, y, d, DirectionalKind::limiting),
                              intersect_orthocomplement(normal_cone(s, y, NormalKind::limiting), d)));
    // sum stability with the directional Clarke tangent
    const Region hat = directional_clarke_tangent(s, y, d);
    EXPECT_TRUE(regions_equal(minkowski_sum(t2, hat), t2));
    EXPECT_TRUE(region_subset_of(clarke_tangent(s, y), hat));
  }
}

#include "sharpcheck/lower_support.hpp"

TEST(LowerSupport, CatalogExamples) {
  Region two = halfplane(-1, 0, -1);
  two.cells.push_back(halfplane(1, 0, -1).cells.front());
  EXPECT_NEAR(lower_gen_support(two, v2(1, 0)).value(), -1.0, 1e-12);
  EXPECT_TRUE(support(two, v2(1, 0)).is_pos_inf());
  EXPECT_TRUE(lower_gen_support(Region::empty(2), v2(1, 0)).is_neg_inf());
  // a direction normal to no stratum has nothing to contribute
  EXPECT_TRUE(lower_gen_support(two, v2(0, 1)).is_pos_inf());
  // quadrant {w <= 0}: normals along the edge {w1 = 0} cannot tilt, so the value stays 0
  PolyCell q = PolyCell::all_space(2);
  q.add_ineq(v2(1, 0), 0).add_ineq(v2(0, 1), 0);
  EXPECT_NEAR(lower_gen_support(Region::from_cell(q, true), v2(1, 0)).value(), 0.0, 1e-12);
  EXPECT_NEAR(lower_gen_support(Region::from_cell(q, true), v2(1, 1)).value(), 0.0, 1e-12);
  // union of the rays {w2 = 0, w1 >= 0} ∪ {w1 = 0, w2 >= 0}: lam = (0, 1) is normal only along the
  // horizontal ray, where <lam, u> = 0, while the support is +inf
  PolyCell h = PolyCell::all_space(2), v = PolyCell::all_space(2);
  h.add_eq(v2(0, 1), 0).add_ineq(v2(-1, 0), 0);
  v.add_eq(v2(1, 0), 0).add_ineq(v2(0, -1), 0);
  Region axes = Region::from_cell(h, true);
  axes.cells.push_back(v);
  EXPECT_NEAR(lower_gen_support(axes, v2(0, 1)).value(), 0.0, 1e-12);
  EXPECT_TRUE(lower_gen_support(axes, v2(-1, -1)).is_finite());
  EXPECT_TRUE(support(axes, v2(0, 1)).is_pos_inf());
}

TEST(LowerSupport, ConvexCoincidesWithSupportAndMonotone) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    PolyCell c = PolyCell::all_space(2);
    for (int k = 0; k < 4; ++k) c.add_ineq(v2(nd(rng), nd(rng)), std::abs(nd(rng)) + 0.2);
    const Region r = Region::from_cell(c, false);
    for (int s = 0; s < 5; ++s) {
      const Vec lam = v2(nd(rng), nd(rng));
      const auto sup = support(r, lam);
      const auto low = lower_gen_support(r, lam);
      EXPECT_FALSE(low.is_pos_inf() && !sup.is_pos_inf());
      if (sup.is_finite()) {
        ASSERT_TRUE(low.is_finite());
        EXPECT_NEAR(low.value(), sup.value(), 1e-8);
      }
      // shrinking the window can only raise the value
      PolyCell box = PolyCell::all_space(2);
      box.add_ineq(v2(1, 0), 0.3).add_ineq(v2(-1, 0), 0.3);
      const auto boxed = lower_gen_support(r, Region::from_cell(box, false), lam);
      if (low.is_finite() && boxed.is_finite())
        EXPECT_LE(low.value(), boxed.value() + 1e-9);
      else
        EXPECT_LE(low, boxed);
    }
  }
}

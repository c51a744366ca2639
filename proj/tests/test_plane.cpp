#include <gtest/gtest.h>

#include <random>
#include <set>

#include "hypmult/plane.hpp"
#include "support.hpp"

using namespace hypmult;
using testsupport::kSeed;

namespace {

MPoly P(const char* text, const FieldPtr& F) { return poly_parse(text, F, 3); }

// Closed points of degree dividing m, found by scanning P^2(F_{q^m}).
std::set<ClosedPoint> orbits_by_enumeration(const std::vector<MPoly>& gens, int m) {
  const FieldPtr base = gens.front().field();
  auto E = gf::extension(*base, m);
  std::vector<MPoly> lifted;
  for (auto& g : gens) lifted.push_back(g.over(E));
  std::set<ClosedPoint> out;
  for_each_proj(2, E, [&](const ProjPoint& Q) {
    for (auto& g : lifted)
      if (g.eval(Q.coords).v) return true;
    out.insert(frobenius_orbit(Q, base));
    return true;
  });
  return out;
}

int enumeration_depth(std::uint32_t q) { return q == 2 ? 6 : q <= 4 ? 4 : 3; }

}  // namespace

TEST(PlaneClosedPoints, ConjugatePairOverTwo) {
  auto F2 = gf::field_create(2, 1);
  auto pts = plane_closed_points({P("T1^2 + T1*T2 + T2^2", F2), P("T0", F2)});
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].degree(), 2u);
  EXPECT_EQ(pts[0].representative().field->q(), 4u);
  auto cycle = plane_intersection_cycle(P("T1^2 + T1*T2 + T2^2", F2), P("T0", F2));
  EXPECT_EQ(cycle_degree(cycle), 2u);
}

TEST(PlaneClosedPoints, CuspMeetsTangentLine) {
  auto F7 = gf::field_create(7, 1);
  auto cycle = plane_intersection_cycle(P("T0*T2^2 - T1^3", F7), P("T2", F7));
  ASSERT_EQ(cycle.size(), 1u);
  EXPECT_EQ(cycle[0].point.representative().to_string(), "1:0:0");
  EXPECT_EQ(cycle[0].multiplicity, 3u);
}

TEST(PlaneClosedPoints, PointsAtInfinityAndCorner) {
  auto F3 = gf::field_create(3, 1);
  auto pts = plane_closed_points({P("T0", F3), P("T1", F3)});
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].representative().to_string(), "0:0:1");
  auto line_pts = plane_closed_points({P("T0", F3), P("T1 - T2", F3)});
  ASSERT_EQ(line_pts.size(), 1u);
  EXPECT_EQ(line_pts[0].representative().to_string(), "0:1:1");
}

TEST(PlaneClosedPoints, PositiveDimensionalRejected) {
  auto F5 = gf::field_create(5, 1);
  EXPECT_THROW(plane_closed_points({P("T0*T1", F5), P("T0*T2", F5)}), error);
  EXPECT_THROW(plane_closed_points({P("T0*T1", F5), P("T0^2", F5)}), error);
  EXPECT_THROW(plane_closed_points({P("T1*T2", F5), P("T1^2", F5)}), error);
}

TEST(PlaneClosedPoints, MatchesEnumerationAndBezout) {
  std::mt19937_64 rng(kSeed);
  int pairs = 0;
  for (auto spec : {"2", "3", "5", "2^2"}) {
    auto F = gf::parse_field(spec);
    for (int i = 0; i < 60; ++i) {
      const int d1 = 1 + static_cast<int>(rng() % 3), d2 = 1 + static_cast<int>(rng() % 3);
      auto f = testsupport::random_homogeneous(F, 3, d1, rng);
      auto g = testsupport::random_homogeneous(F, 3, d2, rng);
      std::vector<ClosedPoint> pts;
      try {
        pts = plane_closed_points({f, g});
      } catch (const error&) {
        continue;  // common component
      }
      const int m = enumeration_depth(F->q());
      std::set<ClosedPoint> small;
      for (auto& C : pts)
        if (m % static_cast<int>(C.degree()) == 0) small.insert(C);
      EXPECT_EQ(small, orbits_by_enumeration({f, g}, m)) << f.to_string() << " / " << g.to_string();
      std::vector<IntersectionComponent> cycle;
      for (auto& C : pts) cycle.push_back({C, plane_intersection_mult(f, g, C.representative())});
      EXPECT_EQ(cycle_degree(cycle), static_cast<std::uint64_t>(d1 * d2)) << f.to_string() << " / " << g.to_string();
      ++pairs;
    }
  }
  EXPECT_GE(pairs, 150);
}

TEST(SingularClosedPoints, MatchMultiplicityScan) {
  std::mt19937_64 rng(kSeed + 1);
  int curves = 0;
  for (auto spec : {"2", "3", "5"}) {
    auto F = gf::parse_field(spec);
    for (int i = 0; i < 40; ++i) {
      auto pl = testsupport::planted_point(F, 2, 3 + static_cast<int>(rng() % 2), 2, rng);
      auto X = HypersurfaceScheme::make(pl.f);
      if (X.delta < 3 || !is_reduced(X).reduced) continue;
      auto sing = singular_closed_points(X);
      const int m = enumeration_depth(F->q()) / 2;
      auto E = gf::extension(*F, m);
      auto XE = HypersurfaceScheme::make(X.f.over(E));
      std::set<ClosedPoint> scanned;
      for (auto& Q : rational_points(XE.f))
        if (multiplicity_at(XE, Q).mu >= 2) scanned.insert(frobenius_orbit(Q, F));
      std::set<ClosedPoint> listed;
      for (auto& C : sing)
        if (m % static_cast<int>(C.degree()) == 0) listed.insert(C);
      EXPECT_EQ(listed, scanned) << X.f.to_string();
      EXPECT_TRUE(std::any_of(sing.begin(), sing.end(), [&](const ClosedPoint& C) { return C.contains(pl.point); }));
      ++curves;
    }
  }
  EXPECT_GE(curves, 60);
}

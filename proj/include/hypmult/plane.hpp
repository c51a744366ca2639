#pragma once

// Closed points of zero-dimensional subschemes of P^2, and intersection
// cycles of plane curves.

#include <set>
#include <vector>

#include "geom.hpp"
#include "ideals.hpp"
#include "localmult.hpp"
#include "upoly.hpp"

namespace hypmult {

namespace plane_detail {

/// Coefficients of a polynomial that involves only variable `var`.
inline upoly::Poly to_univariate(const MPoly& g, int var) {
  upoly::Poly out(static_cast<std::size_t>(std::max(g.degree_in(var), 0) + 1), g.F().zero());
  for (auto& t : g.terms()) out[t.m.e[static_cast<std::size_t>(var)]] = t.c;
  upoly::trim(out);
  return out;
}

/// Every root of a nonzero univariate polynomial over `field`, each in the
/// extension of `field` of the degree of its minimal polynomial.
inline std::vector<std::pair<FieldPtr, Elem>> all_roots(const FieldPtr& field, const upoly::Poly& h) {
  std::vector<std::pair<FieldPtr, Elem>> out;
  if (upoly::degree(h) < 1) return out;
  for (auto& [d, part] : upoly::distinct_degree(*field, h)) {
    auto E = gf::extension(*field, d);
    auto phi = gf::embed_build(field, E);
    for (auto r : upoly::split_roots(*E, upoly::map(phi, part))) out.emplace_back(E, r);
  }
  return out;
}

/// g(x0, y) as a univariate polynomial in y, for g in variables (x, y).
inline upoly::Poly specialize_first(const MPoly& g, const FieldPtr& E, Elem x0) {
  const MPoly h = g.over(E);
  upoly::Poly out(static_cast<std::size_t>(std::max(h.degree_in(1), 0) + 1), E->zero());
  for (auto& t : h.terms()) {
    auto& c = out[t.m.e[1]];
    c = E->add(c, E->mul(t.c, E->pow(x0, t.m.e[0])));
  }
  upoly::trim(out);
  return out;
}

inline upoly::Poly common_gcd(const Field& F, const std::vector<upoly::Poly>& polys) {
  upoly::Poly g;
  for (auto& p : polys) g = upoly::gcd(F, g, p);
  return g;
}

}  // namespace plane_detail

/// Closed points of V(gens) in P^2 over the generators' field.  The affine
/// part T0 = 1 is solved by a lex basis with T2 > T1: its eliminant in T1
/// gives the first coordinates, and for each of them the gcd of the
/// specialized generators gives the second.  The line T0 = 0 is solved
/// directly.  Throws when V(gens) is positive-dimensional.
inline std::vector<ClosedPoint> plane_closed_points(const std::vector<MPoly>& gens) {
  using namespace plane_detail;
  if (gens.empty() || gens.front().nvars() != 3) throw error("plane_closed_points needs polynomials on P^2");
  const FieldPtr base = gens.front().field();
  for (auto& g : gens)
    if (!g.is_homogeneous()) throw error("plane_closed_points needs homogeneous generators");
  std::set<ClosedPoint> found;
  auto record = [&](const FieldPtr& E, std::vector<Elem> coords) {
    found.insert(frobenius_orbit(ProjPoint::make(E, std::move(coords)), base));
  };

  // affine chart T0 = 1, variables (x, y) = (T1, T2)
  std::vector<MPoly> affine;
  for (auto& g : gens) {
    auto a = dehomogenize(g, 0);
    if (!a.is_zero()) affine.push_back(std::move(a));
  }
  if (!affine.empty()) {
    auto G = buchberger(affine, MonomialOrder::lex(std::vector<int>{1, 0}));
    if (!G.is_unit() && !G.generators.front().is_zero()) {
      std::optional<upoly::Poly> eliminant;
      for (auto& g : G.generators)
        if (g.degree_in(1) <= 0) eliminant = to_univariate(g, 0);
      if (!eliminant) throw error("plane_closed_points: affine part is not zero-dimensional");
      for (auto& [E, x0] : all_roots(base, *eliminant)) {
        std::vector<upoly::Poly> fibre;
        for (auto& g : G.generators) fibre.push_back(specialize_first(g, E, x0));
        const auto c = common_gcd(*E, fibre);
        if (c.empty()) throw error("plane_closed_points: a vertical line lies in the locus");
        for (auto& [E2, y0] : all_roots(E, c)) record(E2, {E2->one(), gf::embed_build(E, E2)(x0), y0});
      }
    }
  }

  // line at infinity: [0:1:y] and [0:0:1]
  std::vector<upoly::Poly> at_infinity;
  for (auto& g : gens) {
    MPoly restricted(base, 2);
    std::vector<MPoly::Term> terms;
    for (auto& t : g.terms())
      if (t.m.e[0] == 0) terms.push_back({Monomial::var(1, t.m.e[2]), t.c});
    at_infinity.push_back(to_univariate(MPoly::from_terms(base, 2, std::move(terms)), 1));
  }
  const auto c = common_gcd(*base, at_infinity);
  if (c.empty()) throw error("plane_closed_points: the line T0 = 0 lies in the locus");
  for (auto& [E, y0] : all_roots(base, c)) record(E, {E->zero(), E->one(), y0});
  bool corner = true;
  const std::vector<Elem> e2{base->zero(), base->zero(), base->one()};
  for (auto& g : gens) corner = corner && g.eval(e2).v == 0;
  if (corner) record(base, e2);

  return {found.begin(), found.end()};
}

struct IntersectionComponent {
  ClosedPoint point;
  std::uint64_t multiplicity = 0;
};

/// The intersection cycle of two plane curves without common components.
inline std::vector<IntersectionComponent> plane_intersection_cycle(const MPoly& F, const MPoly& G) {
  std::vector<IntersectionComponent> out;
  for (auto& C : plane_closed_points({F, G}))
    out.push_back({C, plane_intersection_mult(F, G, C.representative())});
  return out;
}

/// sum of multiplicity * degree over the cycle
inline std::uint64_t cycle_degree(const std::vector<IntersectionComponent>& cycle) {
  std::uint64_t total = 0;
  for (auto& c : cycle) total += c.multiplicity * c.point.degree();
  return total;
}

/// Singular closed points of a reduced plane curve.
inline std::vector<ClosedPoint> singular_closed_points(const HypersurfaceScheme& X) {
  if (X.n != 2) throw error("singular_closed_points needs a plane curve");
  return plane_closed_points(jacobian_generators(X.f));
}

}  // namespace hypmult

#pragma once

// Points of projective space over finite fields: enumeration, counting,
// Frobenius orbits and descent of rational points.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "checked.hpp"
#include "mpoly.hpp"
#include "point.hpp"

namespace hypmult {

inline constexpr std::uint64_t kDefaultEnumBudget = 10'000'000;

/// #P^n(F_q) = q^n + ... + q + 1.
inline std::uint64_t proj_count(int n, std::uint64_t q) {
  if (n < 0) return 0;
  std::uint64_t total = 0, pw = 1;
  for (int i = 0; i <= n; ++i) {
    total = checked_add(total, pw);
    if (i < n) pw = checked_mul(pw, q);
  }
  return total;
}

/// Number of r-dimensional subspaces of F_q^n: the product of
/// [t]_q = q^(t-1) + ... + 1 for t = 1..n divided by the same products up
/// to r and n - r.  Evaluated as the running quotient
/// prod_{t=1..r} [n-r+t]_q / [t]_q, each prefix of which is an integer.
inline std::uint64_t gaussian_count(int r, int n, std::uint64_t q) {
  if (r < 0 || r > n) throw error("subspace dimension outside 0..n");
  unsigned __int128 acc = 1;
  for (int t = 1; t <= r; ++t) {
    acc = acc * proj_count(n - r + t - 1, q);
    acc = acc / proj_count(t - 1, q);
    if (acc > UINT64_MAX) throw overflow_error("gaussian binomial overflow");
  }
  return static_cast<std::uint64_t>(acc);
}

/// Visits every point of P^n(F) once: all points with T0 = 1 first (the
/// remaining coordinates in lexicographic index order), then T0 = 0, T1 = 1,
/// and so on.  Stops early when the visitor returns false.
inline void for_each_proj(int n, const FieldPtr& field, const std::function<bool(const ProjPoint&)>& visit,
                          std::uint64_t budget = kDefaultEnumBudget) {
  if (n < 0 || n + 1 > kMaxVars) throw error("projective dimension out of range");
  if (proj_count(n, field->q()) > budget)
    throw limit_error("enumerating P^" + std::to_string(n) + "(F_" + std::to_string(field->q()) +
                      ") exceeds the point budget");
  const std::uint32_t q = field->q();
  ProjPoint P{field, std::vector<Elem>(static_cast<std::size_t>(n + 1))};
  for (int lead = 0; lead <= n; ++lead) {
    std::fill(P.coords.begin(), P.coords.end(), Elem{0});
    P.coords[static_cast<std::size_t>(lead)] = field->one();
    for (;;) {
      if (!visit(P)) return;
      int i = n;
      while (i > lead) {
        auto& c = P.coords[static_cast<std::size_t>(i)];
        if (c.v + 1 < q) {
          ++c.v;
          break;
        }
        c.v = 0;
        --i;
      }
      if (i == lead) break;
    }
  }
}

inline std::vector<ProjPoint> enum_proj(int n, const FieldPtr& field, std::uint64_t budget = kDefaultEnumBudget) {
  std::vector<ProjPoint> out;
  for_each_proj(
      n, field,
      [&](const ProjPoint& P) {
        out.push_back(P);
        return true;
      },
      budget);
  return out;
}

/// Coordinates of a point over `big` pulled back into `small`, when they
/// all lie there.
inline std::optional<ProjPoint> descend_point(const ProjPoint& P, const FieldPtr& small) {
  if (P.field->same_as(*small)) return P;
  auto phi = gf::embed_build(small, P.field);
  ProjPoint r{small, {}};
  for (auto c : P.coords) {
    auto pre = phi.preimage(c);
    if (!pre) return std::nullopt;
    r.coords.push_back(*pre);
  }
  return r;
}

/// A closed point of P^n over a base field: a Frobenius orbit, stored over
/// the smallest field containing its coordinates (F_{q^deg}), sorted.
struct ClosedPoint {
  FieldPtr base;
  std::vector<ProjPoint> orbit;

  std::size_t degree() const { return orbit.size(); }
  int residue_degree() const { return orbit.front().field->k() / base->k(); }
  const ProjPoint& representative() const { return orbit.front(); }

  bool contains(const ProjPoint& P) const {
    auto Q = descend_point(P, orbit.front().field);
    if (!Q) return false;
    return std::binary_search(orbit.begin(), orbit.end(), *Q);
  }

  friend bool operator==(const ClosedPoint& a, const ClosedPoint& b) {
    return a.base->same_as(*b.base) && a.orbit == b.orbit;
  }
  friend bool operator<(const ClosedPoint& a, const ClosedPoint& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a.orbit.front() < b.orbit.front();
  }
};

/// Orbit of P under coordinate-wise x -> x^q, q = #base.
inline ClosedPoint frobenius_orbit(const ProjPoint& P, const FieldPtr& base) {
  if (P.field->p() != base->p() || P.field->k() % base->k() != 0)
    throw error("point field is not an extension of the base field");
  const auto step = static_cast<unsigned>(base->k());
  std::vector<ProjPoint> orbit{P};
  for (ProjPoint Q = P.frobenius(step); !(Q == P); Q = Q.frobenius(step)) orbit.push_back(Q);
  const int deg = static_cast<int>(orbit.size());
  auto small = gf::extension(*base, deg);
  if (!small->same_as(*P.field))
    for (auto& Q : orbit) Q = *descend_point(Q, small);
  std::sort(orbit.begin(), orbit.end());
  return ClosedPoint{base, std::move(orbit)};
}

/// Rational points of V(f) over f's own field.
inline std::vector<ProjPoint> rational_points(const MPoly& f, std::uint64_t budget = kDefaultEnumBudget) {
  std::vector<ProjPoint> out;
  for_each_proj(
      f.nvars() - 1, f.field(),
      [&](const ProjPoint& P) {
        if (f.eval(P.coords).v == 0) out.push_back(P);
        return true;
      },
      budget);
  return out;
}

/// A variety over F_{q^m} seen from F_q: which F_q-points of P^n land on it.
struct DescentView {
  std::vector<MPoly> equations;  // over the extension
  gf::Embedding embedding;       // F_q -> F_{q^m}
};

inline DescentView make_descent_view(std::vector<MPoly> equations, const FieldPtr& base) {
  if (equations.empty()) throw error("descent view needs at least one equation");
  auto phi = gf::embed_build(base, equations.front().field());
  return DescentView{std::move(equations), std::move(phi)};
}

/// Points of P^n(F_q) whose images in P^n(F_{q^m}) satisfy every equation.
/// Returned with F_q coordinates.
inline std::vector<ProjPoint> rational_points_descent(const DescentView& view,
                                                      std::uint64_t budget = kDefaultEnumBudget) {
  std::vector<ProjPoint> out;
  const int n = view.equations.front().nvars() - 1;
  std::vector<Elem> lifted(static_cast<std::size_t>(n + 1));
  for_each_proj(
      n, view.embedding.source(),
      [&](const ProjPoint& P) {
        for (std::size_t i = 0; i < lifted.size(); ++i) lifted[i] = view.embedding(P.coords[i]);
        for (auto& g : view.equations)
          if (g.eval(lifted).v != 0) return true;
        out.push_back(P);
        return true;
      },
      budget);
  return out;
}

}  // namespace hypmult

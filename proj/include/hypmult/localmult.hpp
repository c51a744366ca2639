#pragma once

// Multiplicities of points on projective hypersurfaces and local lengths of
// zero-dimensional ideals.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "checked.hpp"
#include "geom.hpp"
#include "linalg.hpp"
#include "mpoly.hpp"

namespace hypmult {

/// V(f) in P^n.
struct HypersurfaceScheme {
  MPoly f;
  int n = 0;
  int delta = 0;

  static HypersurfaceScheme make(MPoly f) {
    if (f.is_zero()) throw error("hypersurface equation is zero");
    if (!f.is_homogeneous()) throw error("hypersurface equation is not homogeneous");
    const int delta = f.total_degree();
    if (delta < 1) throw error("hypersurface equation is a nonzero constant");
    const int n = f.nvars() - 1;
    return HypersurfaceScheme{std::move(f), n, delta};
  }

  const FieldPtr& field() const { return f.field(); }
  bool contains(const ProjPoint& P) const { return eval_proj(f, P).v == 0; }
};

enum class MultiplicityMethod { translation, derived_order };

inline const char* to_string(MultiplicityMethod m) {
  return m == MultiplicityMethod::translation ? "translation" : "derived-order";
}

struct MultiplicityRecord {
  ProjPoint point;
  int mu = 0;
  MultiplicityMethod method = MultiplicityMethod::translation;
  std::size_t degree = 1;  // size of the closed point's orbit
};

/// P itself, or its image when the hypersurface lives over a larger field.
inline ProjPoint over_common_field(const ProjPoint& P, const FieldPtr& field) {
  return P.field->k() < field->k() ? P.lift(field) : P;
}

/// Lowest degree of the local equation in the chart T_chart = 1.
inline int multiplicity_in_chart(const HypersurfaceScheme& X, const ProjPoint& P_in, int chart) {
  const ProjPoint P = over_common_field(P_in, X.field());
  if (!X.contains(P)) throw error("point " + P.to_string() + " is not on the hypersurface");
  return translate(X.f, P, chart).lowest_degree();
}

inline MultiplicityRecord multiplicity_at(const HypersurfaceScheme& X, const ProjPoint& P) {
  return {P, multiplicity_in_chart(X, P, P.first_nonzero()), MultiplicityMethod::translation, 1};
}

inline MultiplicityRecord multiplicity_at(const HypersurfaceScheme& X, const ClosedPoint& C) {
  auto r = multiplicity_at(X, C.representative());
  r.degree = C.degree();
  return r;
}

/// The coefficient polynomials g^I of f(T + S) for every order 1..delta,
/// computed once and reused across points.
class DerivedTower {
 public:
  explicit DerivedTower(const MPoly& f) : f_(f) {
    for (int a = 1; a <= f.total_degree(); ++a) levels_.push_back(hasse_expand(f, a));
  }
  const MPoly& polynomial() const { return f_; }
  int top() const { return static_cast<int>(levels_.size()); }
  const DerivedSet& order(int alpha) const { return levels_.at(static_cast<std::size_t>(alpha - 1)); }

  /// Same tower with coefficients in an extension field.
  const DerivedTower& over(const FieldPtr& target) const {
    if (f_.field()->same_as(*target)) return *this;
    std::lock_guard lock(*mutex_);
    auto key = target->k();
    auto it = lifted_->find(key);
    if (it == lifted_->end()) {
      auto phi = gf::embed_build(f_.field(), target);
      auto t = std::make_shared<DerivedTower>();
      t->f_ = f_.map(phi);
      for (auto& level : levels_) {
        DerivedSet d;
        d.order = level.order;
        d.nvars = level.nvars;
        d.zero_indices = level.zero_indices;
        for (auto& [I, g] : level.entries) d.entries.emplace(I, g.map(phi));
        for (auto& b : level.basis) d.basis.push_back(b.map(phi));
        t->levels_.push_back(std::move(d));
      }
      it = lifted_->emplace(key, std::move(t)).first;
    }
    return *it->second;
  }

  DerivedTower() = default;

 private:
  MPoly f_;
  std::vector<DerivedSet> levels_;
  std::shared_ptr<std::mutex> mutex_ = std::make_shared<std::mutex>();
  std::shared_ptr<std::map<int, std::shared_ptr<DerivedTower>>> lifted_ =
      std::make_shared<std::map<int, std::shared_ptr<DerivedTower>>>();
};

/// Smallest alpha such that some g^I with |I| = alpha is nonzero at P.
inline MultiplicityRecord multiplicity_via_derived(const DerivedTower& tower_in, const ProjPoint& P_in) {
  const ProjPoint P = over_common_field(P_in, tower_in.polynomial().field());
  const DerivedTower& tower = tower_in.over(P.field);
  if (tower.polynomial().eval(P.coords).v != 0) throw error("point " + P.to_string() + " is not on the hypersurface");
  for (int a = 1; a <= tower.top(); ++a)
    for (auto& [I, g] : tower.order(a).entries)
      if (g.eval(P.coords).v != 0) return {P, a, MultiplicityMethod::derived_order, 1};
  throw error("no derivative of order <= degree is nonzero at " + P.to_string());
}

inline MultiplicityRecord multiplicity_via_derived(const HypersurfaceScheme& X, const ProjPoint& P) {
  return multiplicity_via_derived(DerivedTower(X.f), P);
}

/// C(n+s-1, s) - C(n+s-r-1, s-r); a binomial with negative lower index is 0.
inline std::uint64_t hilbert_samuel(int n, int r, int s) {
  if (n < 1 || r < 1 || s < 0) throw error("hilbert_samuel needs n >= 1, r >= 1, s >= 0");
  return binomial(n + s - 1, s) - binomial(n + s - r - 1, s - r);
}

/// dim of degree-s forms in n variables modulo the multiples of the initial
/// form of the local equation at P.
inline std::uint64_t hilbert_samuel_oracle(const HypersurfaceScheme& X, const ProjPoint& P_in, int s) {
  if (s < 0 || s > 8) throw error("hilbert_samuel_oracle supports 0 <= s <= 8");
  const ProjPoint P = over_common_field(P_in, X.field());
  if (!X.contains(P)) throw error("point " + P.to_string() + " is not on the hypersurface");
  auto local = translate(X.f, P, P.first_nonzero());
  const int r = local.lowest_degree();
  const MPoly initial = local.homogeneous_part(r);
  const int nv = local.nvars();
  const auto cols = monomials_of_degree(nv, s);
  if (s < r) return cols.size();
  std::vector<MPoly> rows;
  for (auto& m : monomials_of_degree(nv, s - r)) rows.push_back(initial.mul_term(m, local.F().one()));
  return cols.size() - linalg::rank(local.F(), coefficient_matrix(rows, cols));
}

/// dim k[x]/(gens + m^D) for the maximal ideal m at the origin.
inline std::uint64_t truncated_colength(const std::vector<MPoly>& gens, int D) {
  if (gens.empty()) throw error("no generators");
  const int nv = gens.front().nvars();
  std::vector<Monomial> cols;
  for (int d = 0; d < D; ++d) {
    auto m = monomials_of_degree(nv, d);
    cols.insert(cols.end(), m.begin(), m.end());
  }
  std::map<Monomial, std::size_t> index;
  for (std::size_t i = 0; i < cols.size(); ++i) index[cols[i]] = i;
  const Field& F = gens.front().F();
  linalg::Matrix rows;
  for (auto& g : gens) {
    if (g.is_zero()) continue;
    const int low = g.lowest_degree();
    for (auto& m : cols) {
      if (m.degree() + low >= D) continue;
      linalg::Row row(cols.size(), F.zero());
      bool any = false;
      for (auto& t : g.terms()) {
        Monomial mm = t.m * m;
        if (mm.degree() >= D) continue;
        row[index.at(mm)] = t.c;
        any = true;
      }
      if (any) rows.push_back(std::move(row));
    }
  }
  return cols.size() - linalg::rank(F, std::move(rows));
}

/// Length of the local ring of k[x]/(gens) at the origin.  Certified by
/// two consecutive truncation orders giving the same colength; a cap
/// reached first means the origin is not an isolated solution (or the cap
/// is too small).
inline std::uint64_t local_length_0dim(const std::vector<MPoly>& gens, int degree_cap) {
  std::uint64_t prev = truncated_colength(gens, 1);
  for (int D = 1; D < degree_cap; ++D) {
    const std::uint64_t next = truncated_colength(gens, D + 1);
    if (next == prev) return prev;
    prev = next;
  }
  throw limit_error("local length did not stabilize below degree " + std::to_string(degree_cap) +
                    "; the origin is not an isolated solution");
}

/// Intersection multiplicity of two plane curves at P (0 when P is not on
/// both).  Curves sharing a component through P are rejected.
inline std::uint64_t plane_intersection_mult(const MPoly& F, const MPoly& G, const ProjPoint& P) {
  if (F.nvars() != 3 || G.nvars() != 3 || P.coords.size() != 3) throw error("plane_intersection_mult needs P^2");
  if (eval_proj(F, P).v != 0 || eval_proj(G, P).v != 0) return 0;
  const int chart = P.first_nonzero();
  const int cap = F.total_degree() * G.total_degree() + 2;
  try {
    return local_length_0dim({translate(F, P, chart), translate(G, P, chart)}, cap);
  } catch (const limit_error&) {
    throw error("curves share a component through " + P.to_string());
  }
}

/// Multiplicity of X along the subvariety cut out by `equations`, read off
/// as the smallest point multiplicity over the subvariety's points in
/// F_{q^m}, growing m until the minimum holds for two consecutive steps.
inline int multiplicity_along(const HypersurfaceScheme& X, const std::vector<MPoly>& equations, int max_m = 6,
                              std::uint64_t budget = 2'000'000) {
  std::optional<int> best, prev;
  for (int m = 1; m <= max_m; ++m) {
    auto E = gf::extension(*X.field(), m);
    if (proj_count(X.n, E->q()) > budget) break;
    auto fx = X.f.over(E);
    std::vector<MPoly> eqs;
    for (auto& g : equations) eqs.push_back(g.over(E));
    const auto X_E = HypersurfaceScheme::make(fx);
    for_each_proj(X.n, E, [&](const ProjPoint& P) {
      for (auto& g : eqs)
        if (g.eval(P.coords).v != 0) return true;
      const int mu = multiplicity_at(X_E, P).mu;
      if (!best || mu < *best) best = mu;
      return true;
    });
    if (best && prev && *best == *prev) return *best;
    prev = best;
  }
  if (!best) throw limit_error("no points of the subvariety found within the budget");
  return *best;
}

}  // namespace hypmult

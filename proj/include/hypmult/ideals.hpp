#pragma once

// Buchberger's algorithm over finite fields, dimensions of projective
// vanishing loci, and the Jacobian-criterion queries built on them.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "geom.hpp"
#include "localmult.hpp"
#include "mpoly.hpp"

namespace hypmult {

enum class OrderKind { grevlex, lex };

/// A monomial order.  priority[0] is the largest variable.
struct MonomialOrder {
  OrderKind kind = OrderKind::grevlex;
  std::vector<int> priority;

  static MonomialOrder grevlex(int nvars) { return {OrderKind::grevlex, identity(nvars)}; }
  static MonomialOrder lex(int nvars) { return {OrderKind::lex, identity(nvars)}; }
  static MonomialOrder lex(std::vector<int> priority) { return {OrderKind::lex, std::move(priority)}; }

  /// a > b
  bool greater(const Monomial& a, const Monomial& b) const {
    if (kind == OrderKind::lex) {
      for (int v : priority) {
        const auto i = static_cast<std::size_t>(v);
        if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
      }
      return false;
    }
    const int da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    for (auto it = priority.rbegin(); it != priority.rend(); ++it) {
      const auto i = static_cast<std::size_t>(*it);
      if (a.e[i] != b.e[i]) return a.e[i] < b.e[i];
    }
    return false;
  }

 private:
  static std::vector<int> identity(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 0);
    return v;
  }
};

struct GroebnerLimits {
  int max_input_vars = 6;
  int max_input_degree = 12;
  int max_degree = 64;
  std::size_t max_pairs = 200'000;
  std::size_t max_basis = 4'000;
};

struct GroebnerStats {
  std::size_t pairs_processed = 0;
  std::size_t pairs_skipped = 0;
  std::size_t zero_reductions = 0;
  std::size_t max_queue = 0;
};

struct GroebnerBasis {
  std::vector<MPoly> generators;  // reduced, monic, sorted by leading monomial
  MonomialOrder order;
  bool homogeneous = false;
  GroebnerStats stats;

  bool is_unit() const {
    return generators.size() == 1 && generators.front().size() == 1 && generators.front().leading().m.degree() == 0;
  }
};

namespace gb_detail {

using Terms = std::vector<MPoly::Term>;

struct Poly {
  Terms t;  // sorted descending in the active order
  int degree = 0;
};

inline void sort_terms(Terms& t, const MonomialOrder& ord) {
  std::sort(t.begin(), t.end(), [&](const MPoly::Term& a, const MPoly::Term& b) { return ord.greater(a.m, b.m); });
}

inline int max_degree(const Terms& t) {
  int d = 0;
  for (auto& x : t) d = std::max(d, x.m.degree());
  return d;
}

inline Poly from_mpoly(const MPoly& f, const MonomialOrder& ord) {
  Poly p{f.terms(), 0};
  sort_terms(p.t, ord);
  p.degree = max_degree(p.t);
  return p;
}

inline MPoly to_mpoly(const Poly& p, const FieldPtr& field, int nvars) { return MPoly::from_terms(field, nvars, p.t); }

inline void make_monic(const Field& F, Terms& t) {
  if (t.empty() || t.front().c.v == 1) return;
  const Elem inv = F.inv(t.front().c);
  for (auto& x : t) x.c = F.mul(x.c, inv);
}

/// a - c * m * b, both sorted in the active order.
inline Terms sub_mul(const Field& F, const MonomialOrder& ord, const Terms& a, Elem c, const Monomial& m,
                     const Terms& b, std::size_t skip_b = 0) {
  Terms r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = skip_b;
  while (i < a.size() || j < b.size()) {
    if (j == b.size()) {
      r.push_back(a[i++]);
      continue;
    }
    const Monomial bm = b[j].m * m;
    if (i == a.size() || ord.greater(bm, a[i].m)) {
      r.push_back({bm, F.neg(F.mul(c, b[j].c))});
      ++j;
    } else if (ord.greater(a[i].m, bm)) {
      r.push_back(a[i++]);
    } else {
      const Elem v = F.sub(a[i].c, F.mul(c, b[j].c));
      if (v.v) r.push_back({bm, v});
      ++i;
      ++j;
    }
  }
  return r;
}

/// Full reduction of p modulo the polynomials in G (all monic).
inline Terms reduce(const Field& F, const MonomialOrder& ord, Terms p, const std::vector<Poly>& G,
                    const std::vector<bool>* active = nullptr) {
  Terms rem;
  while (!p.empty()) {
    const auto& lt = p.front();
    const Poly* div = nullptr;
    for (std::size_t k = 0; k < G.size(); ++k) {
      if (active && !(*active)[k]) continue;
      if (G[k].t.front().m.divides(lt.m)) {
        div = &G[k];
        break;
      }
    }
    if (!div) {
      rem.push_back(lt);
      p.erase(p.begin());
      continue;
    }
    const Monomial m = lt.m / div->t.front().m;
    const Elem c = lt.c;
    Terms tail(p.begin() + 1, p.end());
    p = sub_mul(F, ord, tail, c, m, div->t, 1);
  }
  return rem;
}

}  // namespace gb_detail

/// Remainder of f on division by a Groebner basis.
inline MPoly gb_reduce(const MPoly& f, const GroebnerBasis& G) {
  std::vector<gb_detail::Poly> polys;
  for (auto& g : G.generators) polys.push_back(gb_detail::from_mpoly(g, G.order));
  auto r = gb_detail::reduce(f.F(), G.order, gb_detail::from_mpoly(f, G.order).t, polys);
  return MPoly::from_terms(f.field(), f.nvars(), std::move(r));
}

inline bool gb_contains(const GroebnerBasis& G, const MPoly& f) { return gb_reduce(f, G).is_zero(); }

/// Leading monomial in the given order.
inline Monomial leading_monomial(const MPoly& f, const MonomialOrder& ord) {
  if (f.is_zero()) throw error("leading monomial of zero");
  Monomial best = f.terms().front().m;
  for (auto& t : f.terms())
    if (ord.greater(t.m, best)) best = t.m;
  return best;
}

/// S-polynomial of two nonzero polynomials in the given order.
inline MPoly s_polynomial(const MPoly& a, const MPoly& b, const MonomialOrder& ord) {
  const Monomial la = leading_monomial(a, ord), lb = leading_monomial(b, ord);
  const Monomial l = Monomial::lcm(la, lb);
  const Field& F = a.F();
  return a.mul_term(l / la, F.inv(a.coeff(la))) - b.mul_term(l / lb, F.inv(b.coeff(lb)));
}

inline GroebnerBasis buchberger(const std::vector<MPoly>& gens, const MonomialOrder& order,
                                const GroebnerLimits& limits = {}) {
  using namespace gb_detail;
  if (gens.empty()) throw error("buchberger needs at least one generator");
  const FieldPtr field = gens.front().field();
  const Field& F = *field;
  const int nvars = gens.front().nvars();
  if (nvars > limits.max_input_vars)
    throw limit_error("buchberger input has " + std::to_string(nvars) + " variables; ceiling is " +
                      std::to_string(limits.max_input_vars));
  if (static_cast<int>(order.priority.size()) != nvars) throw error("monomial order arity mismatch");
  bool homogeneous = true;
  std::vector<Poly> G;
  std::vector<bool> active;
  for (auto& g : gens) {
    if (g.nvars() != nvars || !g.field()->same_as(F)) throw error("generators over different rings");
    if (g.total_degree() > limits.max_input_degree)
      throw limit_error("buchberger input degree " + std::to_string(g.total_degree()) + " exceeds ceiling " +
                        std::to_string(limits.max_input_degree));
    if (g.is_zero()) continue;
    homogeneous = homogeneous && g.is_homogeneous();
  }

  GroebnerStats stats;
  struct Pair {
    std::size_t i, j;
    Monomial lcm;
    int deg;
  };
  std::vector<Pair> queue;
  auto lm = [&](std::size_t k) -> const Monomial& { return G[k].t.front().m; };

  auto add_element = [&](Terms t) {
    make_monic(F, t);
    Poly p{std::move(t), 0};
    p.degree = max_degree(p.t);
    if (p.degree > limits.max_degree)
      throw limit_error("buchberger intermediate degree " + std::to_string(p.degree) + " exceeds ceiling; " +
                        std::to_string(stats.pairs_processed) + " pairs processed, " + std::to_string(queue.size()) +
                        " queued, basis size " + std::to_string(G.size()));
    const std::size_t k = G.size();
    G.push_back(std::move(p));
    active.push_back(true);
    if (G.size() > limits.max_basis)
      throw limit_error("buchberger basis exceeds " + std::to_string(limits.max_basis) + " elements; " +
                        std::to_string(queue.size()) + " pairs queued");
    for (std::size_t i = 0; i < k; ++i) {
      if (!active[i]) continue;
      const Monomial l = Monomial::lcm(lm(i), lm(k));
      queue.push_back({i, k, l, l.degree()});
    }
    // an element whose leading monomial the newcomer divides is redundant
    for (std::size_t i = 0; i < k; ++i)
      if (active[i] && lm(k).divides(lm(i))) active[i] = false;
    stats.max_queue = std::max(stats.max_queue, queue.size());
  };

  for (auto& g : gens) {
    if (g.is_zero()) continue;
    Terms r = reduce(F, order, from_mpoly(g, order).t, G, &active);
    if (!r.empty()) add_element(std::move(r));
  }

  std::set<std::pair<std::size_t, std::size_t>> done;
  auto treated = [&](std::size_t a, std::size_t b) { return done.count(std::minmax(a, b)) > 0; };

  while (!queue.empty()) {
    // normal selection: smallest lcm in the active order, then indices
    auto best = std::min_element(queue.begin(), queue.end(), [&](const Pair& a, const Pair& b) {
      if (!(a.lcm == b.lcm)) return order.greater(b.lcm, a.lcm);
      return std::tie(a.i, a.j) < std::tie(b.i, b.j);
    });
    const Pair pr = *best;
    queue.erase(best);
    done.insert(std::minmax(pr.i, pr.j));
    if (++stats.pairs_processed > limits.max_pairs)
      throw limit_error("buchberger pair budget exhausted; " + std::to_string(queue.size()) + " pairs queued, basis size " +
                        std::to_string(G.size()));
    const Monomial &a = lm(pr.i), &b = lm(pr.j);
    // product criterion
    bool coprime = true;
    for (int v = 0; v < nvars; ++v)
      if (a.e[static_cast<std::size_t>(v)] && b.e[static_cast<std::size_t>(v)]) coprime = false;
    if (coprime) {
      ++stats.pairs_skipped;
      continue;
    }
    // chain criterion
    bool chain = false;
    for (std::size_t k = 0; k < G.size() && !chain; ++k) {
      if (k == pr.i || k == pr.j) continue;
      if (lm(k).divides(pr.lcm) && treated(pr.i, k) && treated(pr.j, k)) chain = true;
    }
    if (chain) {
      ++stats.pairs_skipped;
      continue;
    }
    // S = (l/a) * g_i - (l/b) * g_j, both monic; leading terms cancel
    Terms gi;
    const Monomial mi = pr.lcm / a, mj = pr.lcm / b;
    for (std::size_t t = 1; t < G[pr.i].t.size(); ++t) gi.push_back({G[pr.i].t[t].m * mi, G[pr.i].t[t].c});
    Terms s = sub_mul(F, order, gi, F.one(), mj, G[pr.j].t, 1);
    Terms r = reduce(F, order, std::move(s), G, &active);
    if (r.empty()) {
      ++stats.zero_reductions;
      continue;
    }
    add_element(std::move(r));
  }

  // minimal basis, then interreduce
  std::vector<Poly> minimal;
  for (std::size_t k = 0; k < G.size(); ++k) {
    if (!active[k]) continue;
    bool redundant = false;
    for (std::size_t j = 0; j < G.size() && !redundant; ++j) {
      if (j == k || !active[j]) continue;
      if (lm(j).divides(lm(k)) && (!(lm(j) == lm(k)) || j < k)) redundant = true;
    }
    if (!redundant) minimal.push_back(G[k]);
  }
  std::vector<Poly> reduced;
  for (std::size_t k = 0; k < minimal.size(); ++k) {
    std::vector<Poly> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != k) others.push_back(minimal[j]);
    Terms tail(minimal[k].t.begin() + 1, minimal[k].t.end());
    Terms r = reduce(F, order, std::move(tail), others);
    r.insert(r.begin(), minimal[k].t.front());
    reduced.push_back(Poly{std::move(r), 0});
  }
  std::sort(reduced.begin(), reduced.end(),
            [&](const Poly& x, const Poly& y) { return order.greater(y.t.front().m, x.t.front().m); });

  GroebnerBasis out;
  out.order = order;
  out.homogeneous = homogeneous;
  out.stats = stats;
  for (auto& p : reduced) out.generators.push_back(to_mpoly(p, field, nvars));
  if (out.generators.empty()) out.generators.push_back(MPoly(field, nvars));
  return out;
}

/// Largest set of variables containing the support of no leading monomial.
inline int independent_set_size(const GroebnerBasis& G, int nvars) {
  std::vector<std::uint32_t> supports;
  for (auto& g : G.generators) {
    if (g.is_zero()) continue;
    const Monomial m = leading_monomial(g, G.order);
    std::uint32_t mask = 0;
    for (int v = 0; v < nvars; ++v)
      if (m.e[static_cast<std::size_t>(v)]) mask |= 1u << v;
    supports.push_back(mask);
  }
  int best = -1;
  for (std::uint32_t S = 0; S < (1u << nvars); ++S) {
    bool ok = true;
    for (auto m : supports)
      if ((m & ~S) == 0) {
        ok = false;
        break;
      }
    if (ok) best = std::max(best, std::popcount(S));
  }
  return best;
}

/// Dimension of V(gens) in P^n for homogeneous gens; -1 when empty.
inline int projective_dimension(const std::vector<MPoly>& gens, const GroebnerLimits& limits = {}) {
  for (auto& g : gens)
    if (!g.is_homogeneous()) throw error("projective_dimension needs homogeneous generators");
  const int nvars = gens.front().nvars();
  auto G = buchberger(gens, MonomialOrder::grevlex(nvars), limits);
  if (G.is_unit()) return -1;
  const int d = independent_set_size(G, nvars);
  return d <= 0 ? -1 : d - 1;
}

struct SingularLocus {
  int dim = -1;
  bool all_partials_vanish = false;
  std::size_t basis_size = 0;
};

inline std::vector<MPoly> jacobian_generators(const MPoly& f) {
  std::vector<MPoly> gens{f};
  for (int i = 0; i < f.nvars(); ++i) {
    auto d = f.partial(i);
    if (!d.is_zero()) gens.push_back(std::move(d));
  }
  return gens;
}

inline SingularLocus singular_locus(const HypersurfaceScheme& X, const GroebnerLimits& limits = {}) {
  auto gens = jacobian_generators(X.f);
  if (gens.size() == 1) return {X.n - 1, true, 0};
  auto G = buchberger(gens, MonomialOrder::grevlex(X.f.nvars()), limits);
  int dim = -1;
  if (!G.is_unit()) {
    const int d = independent_set_size(G, X.f.nvars());
    dim = d <= 0 ? -1 : d - 1;
  }
  return {dim, false, G.generators.size()};
}

inline int singular_locus_dim(const HypersurfaceScheme& X) { return singular_locus(X).dim; }

struct ReducedVerdict {
  bool reduced = false;
  std::string reason;
  SingularLocus singular;
};

inline ReducedVerdict is_reduced(const HypersurfaceScheme& X) {
  auto S = singular_locus(X);
  if (S.all_partials_vanish)
    return {false, "every partial derivative vanishes identically, so f is a p-th power", S};
  if (S.dim <= X.n - 2)
    return {true, "singular locus has dimension " + std::to_string(S.dim) + " <= n-2", S};
  return {false, "singular locus has dimension " + std::to_string(S.dim) + " = n-1, so f has a repeated factor", S};
}

struct CompleteIntersection {
  int m = 1;
  FieldPtr field;
  std::vector<MPoly> sequence;                 // g_1..g_t over F_{q^m}
  std::vector<std::vector<Elem>> coefficients;  // each g as a combination of the nonzero partials
  std::vector<int> partial_index;               // which partials those coefficients refer to
  std::size_t candidates_tried = 0;
};

inline constexpr int kMaxSearchExtension = 12;
inline constexpr std::size_t kCandidatesPerStep = 48;

/// Finds g_1..g_{n-s-1} in the span of the first partials over F_{q^m},
/// smallest m first, such that each V(f, g_1..g_t) has dimension n-1-t.
/// Candidates: the pure partials, then combinations with coefficient
/// vectors in enumeration order (first nonzero coefficient 1).
inline CompleteIntersection complete_intersection_search(const HypersurfaceScheme& X, int max_m = kMaxSearchExtension,
                                                         std::size_t per_step = kCandidatesPerStep) {
  const auto S = singular_locus(X);
  if (S.all_partials_vanish) throw error("complete_intersection_search: every partial vanishes");
  if (S.dim < 0) throw error("complete_intersection_search: hypersurface is smooth");
  if (S.dim > X.n - 2) throw error("complete_intersection_search: singular locus has dimension n-1");
  const int steps = X.n - S.dim - 1;
  std::vector<int> which;
  for (int i = 0; i < X.f.nvars(); ++i)
    if (!X.f.partial(i).is_zero()) which.push_back(i);
  std::size_t tried = 0;
  for (int m = 1; m <= max_m; ++m) {
    FieldPtr E;
    try {
      E = gf::extension(*X.field(), m);
    } catch (const limit_error&) {
      break;
    }
    const MPoly f = X.f.over(E);
    std::vector<MPoly> partials;
    for (int i : which) partials.push_back(X.f.partial(i).over(E));
    const int k = static_cast<int>(partials.size());

    CompleteIntersection out;
    out.m = m;
    out.field = E;
    out.partial_index = which;
    std::vector<MPoly> ideal{f};
    bool failed = false;
    for (int t = 1; t <= steps && !failed; ++t) {
      bool found = false;
      std::size_t budget = per_step;
      auto attempt = [&](const std::vector<Elem>& c) {
        MPoly g(E, f.nvars());
        for (int i = 0; i < k; ++i)
          if (c[static_cast<std::size_t>(i)].v) g = g + partials[static_cast<std::size_t>(i)].scale(c[static_cast<std::size_t>(i)]);
        ++tried;
        if (g.is_zero()) return false;
        auto trial = ideal;
        trial.push_back(g);
        if (projective_dimension(trial) != X.n - 1 - t) return false;
        ideal = std::move(trial);
        out.sequence.push_back(g);
        out.coefficients.push_back(c);
        return true;
      };
      for (int i = 0; i < k && !found && budget > 0; ++i, --budget) {
        std::vector<Elem> c(static_cast<std::size_t>(k), E->zero());
        c[static_cast<std::size_t>(i)] = E->one();
        found = attempt(c);
      }
      if (!found && k >= 2) {
        for_each_proj(
            k - 1, E,
            [&](const ProjPoint& P) {
              int nonzero = 0;
              for (auto c : P.coords) nonzero += c.v != 0;
              if (nonzero < 2) return true;  // pure partials already tried
              if (budget == 0) return false;
              --budget;
              found = attempt(P.coords);
              return !found;
            },
            UINT64_MAX);
      }
      if (!found) failed = true;
    }
    if (!failed) {
      out.candidates_tried = tried;
      return out;
    }
  }
  throw limit_error("complete_intersection_search exhausted extensions up to degree " + std::to_string(max_m));
}

}  // namespace hypmult

#pragma once

// Corpus generation and end-to-end checks of the multiplicity-counting
// inequalities: the main bound, the plane-curve bound, the cylinder family
// and the point-count bound.  Reports serialize to JSON with every integer
// written as a decimal string.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "checked.hpp"
#include "geom.hpp"
#include "ideals.hpp"
#include "linalg.hpp"
#include "localmult.hpp"
#include "plane.hpp"

namespace hypmult {

// ---------------------------------------------------------------- corpus

struct CorpusConfig {
  std::string field = "3";
  int n = 2;
  int delta_min = 2;
  int delta_max = 3;
  std::size_t count = 10;
  std::uint64_t seed = 1;
  bool require_reduced = true;
  std::optional<ProjPoint> force_singular_point;
  bool random_singular_point = false;  // a fresh rational point per member
  int keep_percent = 60;               // monomial density when unconstrained
  std::size_t attempts_per_member = 500;
};

struct CorpusStats {
  std::size_t attempts = 0;
  std::size_t rejected_non_reduced = 0;
  std::size_t rejected_empty = 0;
};

struct Corpus {
  std::vector<HypersurfaceScheme> members;
  std::vector<std::optional<ProjPoint>> planted;  // per member
  CorpusStats stats;
};

namespace harness_detail {

inline std::uint64_t below(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

inline Elem random_elem(const Field& F, std::mt19937_64& rng) { return Elem{static_cast<std::uint32_t>(below(rng, F.q()))}; }

inline MPoly sparse_homogeneous(const FieldPtr& field, int nvars, int delta, int keep, std::mt19937_64& rng) {
  std::vector<MPoly::Term> terms;
  for (auto& m : monomials_of_degree(nvars, delta))
    if (static_cast<int>(below(rng, 100)) < keep)
      terms.push_back({m, Elem{static_cast<std::uint32_t>(1 + below(rng, field->q() - 1))}});
  return MPoly::from_terms(field, nvars, std::move(terms));
}

inline ProjPoint random_point(const FieldPtr& field, int n, std::mt19937_64& rng) {
  for (;;) {
    std::vector<Elem> c(static_cast<std::size_t>(n + 1));
    for (auto& x : c) x = random_elem(*field, rng);
    if (std::any_of(c.begin(), c.end(), [](Elem e) { return e.v != 0; })) return ProjPoint::make(field, std::move(c));
  }
}

/// A random degree-delta form vanishing with all first partials at P: a
/// random element of the kernel of the evaluation constraints.
inline MPoly singular_at(const FieldPtr& field, int nvars, int delta, const ProjPoint& P, std::mt19937_64& rng) {
  const Field& F = *field;
  const auto mons = monomials_of_degree(nvars, delta);
  linalg::Matrix rows(static_cast<std::size_t>(nvars) + 1, linalg::Row(mons.size(), F.zero()));
  for (std::size_t j = 0; j < mons.size(); ++j) {
    const MPoly m = MPoly::monomial(field, nvars, mons[j], F.one());
    rows[0][j] = m.eval(P.coords);
    for (int i = 0; i < nvars; ++i) rows[static_cast<std::size_t>(i) + 1][j] = m.partial(i).eval(P.coords);
  }
  const auto K = linalg::kernel(F, rows, mons.size());
  std::vector<MPoly::Term> terms;
  std::vector<Elem> c(mons.size(), F.zero());
  for (auto& v : K) {
    const Elem a = random_elem(F, rng);
    for (std::size_t j = 0; j < mons.size(); ++j) c[j] = F.add(c[j], F.mul(a, v[j]));
  }
  for (std::size_t j = 0; j < mons.size(); ++j)
    if (c[j].v) terms.push_back({mons[j], c[j]});
  return MPoly::from_terms(field, nvars, std::move(terms));
}

}  // namespace harness_detail

/// Deterministic for a given config: members are drawn from one
/// mt19937_64 stream in order, rejecting zero forms and (when required)
/// non-reduced ones.
inline Corpus generate_corpus(const CorpusConfig& cfg) {
  using namespace harness_detail;
  if (cfg.n < 1 || cfg.n + 1 > kMaxVars) throw error("corpus ambient dimension out of range");
  if (cfg.delta_min < 1 || cfg.delta_max < cfg.delta_min) throw error("corpus degree range is empty");
  const FieldPtr field = gf::parse_field(cfg.field);
  if (cfg.force_singular_point && !cfg.force_singular_point->field->same_as(*field))
    throw error("planted point is not over the corpus field");
  if (cfg.force_singular_point && cfg.force_singular_point->n() != cfg.n)
    throw error("planted point has the wrong number of coordinates");
  const int nvars = cfg.n + 1;
  std::mt19937_64 rng(cfg.seed);
  Corpus out;
  const std::size_t budget = cfg.count * cfg.attempts_per_member;
  while (out.members.size() < cfg.count) {
    if (out.stats.attempts >= budget)
      throw limit_error("corpus rejection budget exhausted after " + std::to_string(out.stats.attempts) + " attempts");
    ++out.stats.attempts;
    const int delta = cfg.delta_min + static_cast<int>(below(rng, static_cast<std::uint64_t>(cfg.delta_max - cfg.delta_min + 1)));
    std::optional<ProjPoint> P = cfg.force_singular_point;
    if (!P && cfg.random_singular_point) P = random_point(field, cfg.n, rng);
    MPoly f = P ? singular_at(field, nvars, delta, *P, rng) : sparse_homogeneous(field, nvars, delta, cfg.keep_percent, rng);
    if (f.is_zero()) {
      ++out.stats.rejected_empty;
      continue;
    }
    auto X = HypersurfaceScheme::make(std::move(f));
    if (cfg.require_reduced && !is_reduced(X).reduced) {
      ++out.stats.rejected_non_reduced;
      continue;
    }
    out.members.push_back(std::move(X));
    out.planted.push_back(P);
  }
  return out;
}

// ---------------------------------------------------------------- main bound

struct BoundReport {
  std::string field;
  int delta = 0;
  int n = 0;
  std::uint64_t q = 0;
  int s = -1;
  std::uint64_t rational_points = 0;
  std::uint64_t lhs = 0;
  std::uint64_t rhs = 0;
  std::vector<std::uint64_t> rhs_terms;  // t = 0..s
  bool ok = false;
  std::string ratio;  // lhs / (delta (delta-1)^(n-s-1) max(delta-1, q)^s), reduced
  std::vector<MultiplicityRecord> per_point;  // mu >= 2 only
  std::uint64_t enumerate_us = 0;
  std::uint64_t multiplicity_us = 0;
};

/// Sum over t = 0..s of delta (delta-1)^(n-s-1+t) #P^(s-t)(F_q), one term
/// per t.
inline std::vector<std::uint64_t> main_bound_terms(int delta, int n, std::uint64_t q, int s) {
  std::vector<std::uint64_t> terms;
  const std::uint64_t d = static_cast<std::uint64_t>(delta);
  for (int t = 0; t <= s; ++t)
    terms.push_back(checked_mul(checked_mul(d, checked_pow(d - 1, static_cast<unsigned>(n - s - 1 + t))), proj_count(s - t, q)));
  return terms;
}

/// The same sum by geometric series: with a = delta - 1, the inner sum
/// sum_t a^t #P^(s-t) is sum_{k=0..s} h_k(a, q), the complete homogeneous
/// sums, each (a^(k+1) - q^(k+1)) / (a - q) or (k+1) q^k when a = q.
inline std::uint64_t main_bound_closed_form(int delta, int n, std::uint64_t q, int s) {
  if (s < 0) return 0;
  const std::uint64_t a = static_cast<std::uint64_t>(delta - 1);
  std::uint64_t inner = 0;
  for (int k = 0; k <= s; ++k) {
    std::uint64_t h;
    if (a == q) {
      h = checked_mul(static_cast<std::uint64_t>(k + 1), checked_pow(q, static_cast<unsigned>(k)));
    } else {
      const std::uint64_t hi = std::max(a, q), lo = std::min(a, q);
      h = (checked_pow(hi, static_cast<unsigned>(k + 1)) - checked_pow(lo, static_cast<unsigned>(k + 1))) / (hi - lo);
    }
    inner = checked_add(inner, h);
  }
  return checked_mul(checked_mul(static_cast<std::uint64_t>(delta), checked_pow(a, static_cast<unsigned>(n - s - 1))), inner);
}

inline std::string reduced_fraction(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw error("ratio with zero denominator");
  const std::uint64_t g = std::gcd(num, den);
  return std::to_string(num / g) + "/" + std::to_string(den / g);
}

inline std::uint64_t elapsed_us(std::chrono::steady_clock::time_point since) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - since).count());
}

/// Enumerates X(F_q), computes every multiplicity and compares
/// sum mu (mu-1)^(n-s-1) with the bound.  For smooth X the sum must vanish.
inline BoundReport verify_main_bound(const HypersurfaceScheme& X, std::uint64_t budget = kDefaultEnumBudget) {
  if (X.n < 2) throw error("main bound needs n >= 2");
  const auto verdict = is_reduced(X);
  if (!verdict.reduced) throw error("hypersurface is not reduced: " + verdict.reason);
  BoundReport r;
  r.field = X.field()->spec();
  r.delta = X.delta;
  r.n = X.n;
  r.q = X.field()->q();
  r.s = verdict.singular.dim;

  auto t0 = std::chrono::steady_clock::now();
  const auto points = rational_points(X.f, budget);
  r.enumerate_us = elapsed_us(t0);
  r.rational_points = points.size();

  t0 = std::chrono::steady_clock::now();
  const unsigned e = static_cast<unsigned>(X.n - r.s - 1);
  for (auto& P : points) {
    auto rec = multiplicity_at(X, P);
    if (rec.mu < 2) continue;
    r.lhs = checked_add(r.lhs, checked_mul(static_cast<std::uint64_t>(rec.mu), checked_pow(static_cast<std::uint64_t>(rec.mu - 1), e)));
    r.per_point.push_back(std::move(rec));
  }
  r.multiplicity_us = elapsed_us(t0);

  r.rhs_terms = main_bound_terms(r.delta, r.n, r.q, r.s);
  for (auto t : r.rhs_terms) r.rhs = checked_add(r.rhs, t);
  if (r.rhs != main_bound_closed_form(r.delta, r.n, r.q, r.s))
    throw error("bound evaluation disagrees between term-wise and closed form");
  r.ok = r.lhs <= r.rhs;
  if (r.s < 0) {
    r.ratio = reduced_fraction(r.lhs, 1);
  } else {
    const std::uint64_t d = static_cast<std::uint64_t>(r.delta);
    const std::uint64_t den = checked_mul(checked_mul(d, checked_pow(d - 1, e)),
                                          checked_pow(std::max(d - 1, r.q), static_cast<unsigned>(r.s)));
    r.ratio = reduced_fraction(r.lhs, den);
  }
  return r;
}

/// Reports in input order; members are checked on up to `threads` workers.
inline std::vector<BoundReport> verify_members(const std::vector<HypersurfaceScheme>& members, unsigned threads = 0) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<BoundReport> out(members.size());
  std::vector<std::exception_ptr> failures(members.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < members.size();) {
      try {
        out[i] = verify_main_bound(members[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
  return out;
}

/// sum mu (mu-1)^t over the points with mu >= 2, for t = 1..n-s-1.
inline std::vector<std::uint64_t> counting_chain(const BoundReport& r) {
  std::vector<std::uint64_t> chain;
  for (int t = 1; t <= r.n - r.s - 1; ++t) {
    std::uint64_t sum = 0;
    for (auto& rec : r.per_point)
      sum = checked_add(sum, checked_mul(static_cast<std::uint64_t>(rec.mu),
                                         checked_pow(static_cast<std::uint64_t>(rec.mu - 1), static_cast<unsigned>(t))));
    chain.push_back(sum);
  }
  return chain;
}

inline bool is_nondecreasing(const std::vector<std::uint64_t>& v) { return std::is_sorted(v.begin(), v.end()); }

// ---------------------------------------------------------------- cylinder

struct CylinderReport {
  int delta = 0;
  int n = 0;
  std::uint64_t q = 0;
  MPoly f;
  int s = -1;
  std::uint64_t lhs = 0;
  std::uint64_t expected = 0;  // delta (delta-1) #P^(n-2)
  std::uint64_t singular_points = 0;
  bool every_singular_mu_is_delta = false;
  BoundReport bound;
  bool ok = false;
};

/// prod (T1 - c_i T2) over delta distinct slopes, the last one T2 when
/// delta = q + 1, as a hypersurface of P^n.
inline MPoly concurrent_lines(int delta, int n, const FieldPtr& field) {
  if (delta < 1 || static_cast<std::uint64_t>(delta) > field->q() + 1)
    throw error("need 1 <= delta <= q + 1 distinct rational slopes");
  const int nv = n + 1;
  const MPoly T1 = MPoly::variable(field, nv, 1), T2 = MPoly::variable(field, nv, 2);
  MPoly f = MPoly::constant(field, nv, field->one());
  const auto elems = gf::enumerate_field(*field);
  for (int i = 0; i < delta; ++i) {
    if (static_cast<std::size_t>(i) == elems.size()) f = f * T2;
    else f = f * (T1 - T2.scale(elems[static_cast<std::size_t>(i)]));
  }
  return f;
}

inline CylinderReport cylinder_family_check(int delta, int n, const FieldPtr& field) {
  if (n < 3) throw error("the cylinder family needs n >= 3");
  CylinderReport r;
  r.delta = delta;
  r.n = n;
  r.q = field->q();
  r.f = concurrent_lines(delta, n, field);
  const auto X = HypersurfaceScheme::make(r.f);
  r.bound = verify_main_bound(X);
  r.s = r.bound.s;
  r.lhs = r.bound.lhs;
  r.expected = checked_mul(checked_mul(static_cast<std::uint64_t>(delta), static_cast<std::uint64_t>(delta - 1)), proj_count(n - 2, r.q));
  r.singular_points = r.bound.per_point.size();
  r.every_singular_mu_is_delta =
      std::all_of(r.bound.per_point.begin(), r.bound.per_point.end(), [&](const MultiplicityRecord& m) { return m.mu == delta; });
  r.ok = r.bound.ok && r.s == n - 2 && r.lhs == r.expected && r.every_singular_mu_is_delta &&
         r.singular_points == proj_count(n - 2, r.q);
  return r;
}

// ---------------------------------------------------------------- plane curves

struct FultonReport {
  int delta = 0;
  std::uint64_t bound = 0;  // delta (delta-1)
  std::uint64_t rational_sum = 0;
  std::optional<std::uint64_t> closed_sum;  // weighted by closed-point degree
  std::vector<MultiplicityRecord> points;   // mu >= 2
  bool ok = false;
};

inline FultonReport fulton_check(const HypersurfaceScheme& X, bool over_closed_points) {
  if (X.n != 2) throw error("the plane-curve bound needs n = 2");
  const auto verdict = is_reduced(X);
  if (!verdict.reduced) throw error("curve is not reduced: " + verdict.reason);
  FultonReport r;
  r.delta = X.delta;
  r.bound = static_cast<std::uint64_t>(X.delta) * static_cast<std::uint64_t>(X.delta - 1);
  for (auto& P : rational_points(X.f)) {
    auto rec = multiplicity_at(X, P);
    if (rec.mu < 2) continue;
    r.rational_sum += static_cast<std::uint64_t>(rec.mu) * static_cast<std::uint64_t>(rec.mu - 1);
    if (!over_closed_points) r.points.push_back(std::move(rec));
  }
  r.ok = r.rational_sum <= r.bound;
  if (over_closed_points) {
    std::uint64_t sum = 0;
    if (verdict.singular.dim >= 0) {
      for (auto& C : singular_closed_points(X)) {
        auto rec = multiplicity_at(X, C);
        if (rec.mu < 2) continue;
        sum += rec.degree * static_cast<std::uint64_t>(rec.mu) * static_cast<std::uint64_t>(rec.mu - 1);
        r.points.push_back(std::move(rec));
      }
    }
    r.closed_sum = sum;
    r.ok = r.ok && sum <= r.bound;
  }
  return r;
}

struct BezoutReport {
  std::vector<IntersectionComponent> cycle;
  std::uint64_t total = 0;
  std::uint64_t expected = 0;
  bool ok = false;
  bool product_bound_ok = false;  // i >= mu(F) mu(G) at every component
};

inline BezoutReport bezout_check(const MPoly& F, const MPoly& G) {
  BezoutReport r;
  r.cycle = plane_intersection_cycle(F, G);
  r.total = cycle_degree(r.cycle);
  r.expected = static_cast<std::uint64_t>(F.total_degree()) * static_cast<std::uint64_t>(G.total_degree());
  r.ok = r.total == r.expected;
  const auto XF = HypersurfaceScheme::make(F), XG = HypersurfaceScheme::make(G);
  r.product_bound_ok = std::all_of(r.cycle.begin(), r.cycle.end(), [&](const IntersectionComponent& c) {
    return c.multiplicity >= static_cast<std::uint64_t>(multiplicity_at(XF, c.point).mu) *
                                 static_cast<std::uint64_t>(multiplicity_at(XG, c.point).mu);
  });
  return r;
}

// ---------------------------------------------------------------- point counts

struct LineaireReport {
  std::uint64_t points = 0;
  std::uint64_t bound = 0;  // delta #P^(n-1)
  // plane curves: rational singular points against delta (delta-1)
  std::optional<std::uint64_t> singular_points;
  std::optional<std::uint64_t> singular_bound;
  bool ok = false;
};

inline LineaireReport lineaire_check(const HypersurfaceScheme& X) {
  LineaireReport r;
  const auto points = rational_points(X.f);
  r.points = points.size();
  r.bound = checked_mul(static_cast<std::uint64_t>(X.delta), proj_count(X.n - 1, X.field()->q()));
  r.ok = r.points <= r.bound;
  if (X.n == 2 && X.delta >= 2 && is_reduced(X).reduced) {
    std::uint64_t sing = 0;
    for (auto& P : points)
      if (multiplicity_at(X, P).mu >= 2) ++sing;
    r.singular_points = sing;
    r.singular_bound = static_cast<std::uint64_t>(X.delta) * static_cast<std::uint64_t>(X.delta - 1);
    r.ok = r.ok && sing <= *r.singular_bound;
  }
  return r;
}

// ---------------------------------------------------------------- JSON

namespace harness_detail {

inline std::string num(std::uint64_t v) { return std::to_string(v); }
inline std::string num(int v) { return std::to_string(v); }

inline std::uint64_t to_u64(const nlohmann::json& j) {
  const auto s = j.get<std::string>();
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw error("expected a decimal string, got '" + s + "'");
  return std::stoull(s);
}

inline int to_int(const nlohmann::json& j) {
  const auto s = j.get<std::string>();
  if (s.empty() || s.find_first_not_of("-0123456789") != std::string::npos) throw error("expected a decimal string, got '" + s + "'");
  return std::stoi(s);
}

}  // namespace harness_detail

inline nlohmann::json bound_report_to_json(const BoundReport& r) {
  using harness_detail::num;
  nlohmann::json j;
  j["field"] = r.field;
  j["delta"] = num(r.delta);
  j["n"] = num(r.n);
  j["q"] = num(r.q);
  j["s"] = num(r.s);
  j["rational_points"] = num(r.rational_points);
  j["lhs"] = num(r.lhs);
  j["rhs"] = num(r.rhs);
  j["rhs_terms"] = nlohmann::json::array();
  for (auto t : r.rhs_terms) j["rhs_terms"].push_back(num(t));
  j["ok"] = r.ok;
  j["ratio"] = r.ratio;
  j["per_point"] = nlohmann::json::array();
  for (auto& p : r.per_point)
    j["per_point"].push_back(
        {{"point", p.point.to_string()}, {"mu", num(p.mu)}, {"method", to_string(p.method)}, {"degree", num(static_cast<std::uint64_t>(p.degree))}});
  j["timings"] = {{"enumerate_us", num(r.enumerate_us)}, {"multiplicity_us", num(r.multiplicity_us)}};
  return j;
}

inline BoundReport bound_report_from_json(const nlohmann::json& j) {
  using namespace harness_detail;
  try {
    BoundReport r;
    r.field = j.at("field").get<std::string>();
    const FieldPtr field = gf::parse_field(r.field);
    r.delta = to_int(j.at("delta"));
    r.n = to_int(j.at("n"));
    r.q = to_u64(j.at("q"));
    r.s = to_int(j.at("s"));
    r.rational_points = to_u64(j.at("rational_points"));
    r.lhs = to_u64(j.at("lhs"));
    r.rhs = to_u64(j.at("rhs"));
    for (auto& t : j.at("rhs_terms")) r.rhs_terms.push_back(to_u64(t));
    r.ok = j.at("ok").get<bool>();
    r.ratio = j.at("ratio").get<std::string>();
    for (auto& p : j.at("per_point")) {
      MultiplicityRecord m;
      m.point = parse_point(p.at("point").get<std::string>(), field);
      m.mu = to_int(p.at("mu"));
      const auto method = p.at("method").get<std::string>();
      if (method == "translation") m.method = MultiplicityMethod::translation;
      else if (method == "derived-order") m.method = MultiplicityMethod::derived_order;
      else throw error("unknown multiplicity method '" + method + "'");
      m.degree = static_cast<std::size_t>(to_u64(p.at("degree")));
      r.per_point.push_back(std::move(m));
    }
    r.enumerate_us = to_u64(j.at("timings").at("enumerate_us"));
    r.multiplicity_us = to_u64(j.at("timings").at("multiplicity_us"));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw error(std::string("malformed bound report: ") + e.what());
  }
}

}  // namespace hypmult

// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "hypmult/harness.hpp"
#include "hypmult/itree.hpp"
#include "support.hpp"

using namespace hypmult;
using testsupport::kSeed;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond && pass) detail << " first failure: " << what << ";";
    pass = pass && cond;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

// ---------------------------------------------------------------- 1

Outcome fixture() {
  Outcome o;
  const auto t0 = Clock::now();
  auto forest = load_forest(std::string(HYPMULT_TEST_DATA) + "/p4_example_forest.json");
  auto F5 = forest.field;
  auto M = parse_point("0:1:0:0:0", F5);
  auto X1 = HypersurfaceScheme::make(poly_parse("T4", F5, 5));
  auto X2 = HypersurfaceScheme::make(poly_parse("T0^2*T1*T3 - T2^3*T3 + T2^2*T1*T3", F5, 5));
  const int mu1 = multiplicity_at(X1, M).mu, mu2 = multiplicity_at(X2, M).mu;
  o.require(mu1 == 1, "mu_M(X1) = " + std::to_string(mu1));
  o.require(mu2 == 3, "mu_M(X2) = " + std::to_string(mu2));
  o.require(multiplicity_via_derived(X2, M).mu == 3, "derived-order mu_M(X2)");

  auto curve = poly_parse("T0^2*T1 - T2^3 + T2^2*T1", F5, 3);
  auto T2 = poly_parse("T2", F5, 3);
  auto lines = poly_parse("T0*T1 + T0^2", F5, 3);
  const auto i121 = plane_intersection_mult(curve, T2, parse_point("0:1:0", F5));
  const auto i122 = plane_intersection_mult(curve, T2, parse_point("1:0:0", F5));
  const auto i21 = plane_intersection_mult(lines, T2, parse_point("0:1:0", F5));
  const auto i22 = plane_intersection_mult(lines, T2, parse_point("1:-1:0", F5));
  const auto i111 = local_length_0dim({translate(poly_parse("T0 + T1", F5, 2), parse_point("1:-1", F5), 0)}, 4);
  const auto slice = local_length_0dim({poly_parse("T0", F5, 2), poly_parse("T0 - T1^3 + T1^2*T0", F5, 2)}, 8);
  o.require(i121 == 2 && i122 == 1 && i21 == 1 && i22 == 1 && i111 == 1, "plane-reduced intersection numbers");
  o.require(slice == 3, "sliced length at Y11 = " + std::to_string(slice));

  o.require(validate_forest(forest).empty(), "fixture forest is structurally valid");
  auto target = find_scheme(forest, "Y121");
  o.require(target.has_value(), "fixture names Y121");
  if (target) {
    auto v = check_chongshu2(forest, *target, static_cast<std::uint64_t>(mu1 * mu2));
    o.require(v.applicable && v.ok && v.lhs == 3 && v.rhs == 3, "aggregate 3 >= 3: " + v.reason);
  }
  const double secs = seconds_since(t0);
  o.require(secs < 1.0, "took " + std::to_string(secs) + " s");
  o.detail << " mu=(" << mu1 << "," << mu2 << ") i=(" << i121 << "," << i122 << "," << i21 << "," << i22 << "," << i111
           << ") slice=" << slice << " in " << secs << " s";
  return o;
}

// ---------------------------------------------------------------- 2, 5, 6

struct SweepCorpus {
  std::vector<HypersurfaceScheme> members;
  std::vector<std::optional<ProjPoint>> planted;
};

SweepCorpus sweep_corpus() {
  SweepCorpus out;
  std::vector<std::tuple<int, std::string, int>> combos;
  for (int n : {2, 3})
    for (std::string q : {"2", "3", "5"})
      for (int d = 2; d <= 5; ++d) combos.emplace_back(n, q, d);
  auto add = [&](std::size_t total, bool planted, std::uint64_t seed) {
    for (std::size_t k = 0; k < combos.size(); ++k) {
      const std::size_t count = total / combos.size() + (k < total % combos.size() ? 1 : 0);
      if (count == 0) continue;
      CorpusConfig cfg;
      std::tie(cfg.n, cfg.field, cfg.delta_min) = combos[k];
      cfg.delta_max = cfg.delta_min;
      cfg.count = count;
      cfg.seed = seed + k;
      cfg.random_singular_point = planted;
      auto c = generate_corpus(cfg);
      for (std::size_t i = 0; i < c.members.size(); ++i) {
        out.members.push_back(c.members[i]);
        out.planted.push_back(c.planted[i]);
      }
    }
  };
  add(200, false, kSeed);
  add(50, true, kSeed + 1000);
  return out;
}

Outcome main_sweep(const SweepCorpus& corpus) {
  Outcome o;
  const auto t0 = Clock::now();
  auto reports = verify_members(corpus.members);
  std::size_t ok = 0, singular = 0, chain_ok = 0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    ok += r.ok;
    singular += r.s >= 0;
    const bool chain = is_nondecreasing(counting_chain(r));
    chain_ok += chain;
    o.require(r.ok, "bound fails on " + corpus.members[i].f.to_string());
    o.require(r.s >= 0 || r.lhs == 0, "smooth member with nonzero sum");
    o.require(chain, "counting chain decreases");
  }
  const double secs = seconds_since(t0);
  o.require(corpus.members.size() == 250, "corpus size " + std::to_string(corpus.members.size()));
  o.require(secs < 300.0, "took " + std::to_string(secs) + " s");
  o.detail << " " << ok << "/" << reports.size() << " ok, " << singular << " singular, chain " << chain_ok << "/"
           << reports.size() << ", " << secs << " s";
  return o;
}

Outcome hilbert_samuel_check(const SweepCorpus& corpus) {
  Outcome o;
  std::mt19937_64 rng(kSeed + 5);
  std::size_t grid = 0;
  auto F = gf::field_create(5, 1);
  for (int n = 1; n <= 4; ++n)
    for (int r = 1; r <= 4; ++r) {
      testsupport::Planted pl;
      do pl = testsupport::planted_point(F, n, r + 1, r, rng);
      while (pl.f.total_degree() != r + 1);
      auto X = HypersurfaceScheme::make(pl.f);
      for (int s = 0; s <= 8; ++s, ++grid)
        o.require(hilbert_samuel_oracle(X, pl.point, s) == hilbert_samuel(n, r, s),
                  "n=" + std::to_string(n) + " r=" + std::to_string(r) + " s=" + std::to_string(s));
    }
  std::size_t points = 0;
  for (std::size_t i = 0; i < corpus.members.size() && points < 50; ++i) {
    const auto& X = corpus.members[i];
    std::vector<ProjPoint> pts;
    if (corpus.planted[i]) pts.push_back(*corpus.planted[i]);
    else {
      auto all = rational_points(X.f);
      if (all.empty()) continue;
      pts.push_back(all[rng() % all.size()]);
    }
    for (auto& P : pts) {
      const int mu = multiplicity_at(X, P).mu;
      for (int s = 0; s <= 8; ++s)
        o.require(hilbert_samuel_oracle(X, P, s) == hilbert_samuel(X.n, mu, s), "corpus point " + P.to_string());
      ++points;
    }
  }
  o.require(points == 50, "only " + std::to_string(points) + " corpus points");
  o.detail << " " << grid << " grid values, " << points << " corpus points";
  return o;
}

Outcome dual_algorithms(const SweepCorpus& corpus) {
  Outcome o;
  std::size_t points = 0;
  std::vector<std::pair<std::size_t, ProjPoint>> pool, singular_pool;
  for (std::size_t i = 0; i < corpus.members.size(); ++i) {
    const auto& X = corpus.members[i];
    DerivedTower tower(X.f);
    for (auto& P : rational_points(X.f)) {
      const int a = multiplicity_at(X, P).mu, b = multiplicity_via_derived(tower, P).mu;
      o.require(a == b, X.f.to_string() + " at " + P.to_string());
      ++points;
      (a >= 2 ? singular_pool : pool).emplace_back(i, P);
    }
  }
  std::mt19937_64 rng(kSeed + 6);
  std::size_t sampled = 0;
  for (; sampled < 50 && !pool.empty() && !singular_pool.empty(); ++sampled) {
    auto& from = sampled % 2 ? pool : singular_pool;
    auto& [i, P] = from[rng() % from.size()];
    const auto& X = corpus.members[i];
    const int mu = multiplicity_at(X, P).mu;
    for (int m : {2, 3, 4}) {
      auto E = gf::extension(*X.field(), m);
      auto XE = HypersurfaceScheme::make(X.f.over(E));
      o.require(multiplicity_at(XE, P.lift(E)).mu == mu, "base change m=" + std::to_string(m) + " at " + P.to_string());
    }
  }
  o.require(sampled == 50, "too few points to sample");
  o.detail << " " << points << " points agree, " << sampled << " points (half singular) stable under m = 2, 3, 4";
  return o;
}

// ---------------------------------------------------------------- 3

Outcome cylinders() {
  Outcome o;
  struct Case {
    int delta, n;
    std::uint32_t q;
  };
  for (auto c : {Case{3, 3, 5}, Case{2, 3, 3}, Case{4, 3, 5}, Case{3, 4, 3}}) {
    auto r = cylinder_family_check(c.delta, c.n, gf::field_create(c.q, 1));
    std::uint64_t points = 0, pw = 1;
    for (int j = 0; j <= c.n - 2; ++j, pw *= c.q) points += pw;
    const std::uint64_t expected = static_cast<std::uint64_t>(c.delta * (c.delta - 1)) * points;
    o.require(r.lhs == expected && r.s == c.n - 2 && r.ok, "cylinder delta=" + std::to_string(c.delta));
    o.detail << " (" << c.delta << "," << c.n << "," << c.q << ")->" << r.lhs;
  }
  return o;
}

// ---------------------------------------------------------------- 4, 9

struct PairResult {
  MPoly f, g;
  BezoutReport report;
};

std::vector<PairResult> bezout_pairs() {
  std::mt19937_64 rng(kSeed + 4);
  std::vector<PairResult> out;
  const char* fields[] = {"2", "3", "5", "2^2"};
  for (std::size_t k = 0; out.size() < 100; ++k) {
    auto F = gf::parse_field(fields[k % 4]);
    auto f = testsupport::random_homogeneous(F, 3, 1 + static_cast<int>(rng() % 3), rng);
    auto g = testsupport::random_homogeneous(F, 3, 1 + static_cast<int>(rng() % 3), rng);
    try {
      out.push_back({f, g, bezout_check(f, g)});
    } catch (const error&) {
      // common component
    }
  }
  return out;
}

Outcome bezout(const std::vector<PairResult>& pairs) {
  Outcome o;
  std::size_t exact = 0, components = 0;
  for (auto& p : pairs) {
    exact += p.report.ok;
    components += p.report.cycle.size();
    o.require(p.report.ok, p.f.to_string() + " / " + p.g.to_string());
  }
  o.detail << " " << exact << "/" << pairs.size() << " pairs exact, " << components << " closed points";
  return o;
}

Outcome product_bound(const std::vector<PairResult>& pairs) {
  Outcome o;
  std::size_t checked = 0;
  for (auto& p : pairs) {
    auto XF = HypersurfaceScheme::make(p.f), XG = HypersurfaceScheme::make(p.g);
    for (auto& c : p.report.cycle) {
      const auto a = static_cast<std::uint64_t>(multiplicity_at(XF, c.point).mu);
      const auto b = static_cast<std::uint64_t>(multiplicity_at(XG, c.point).mu);
      o.require(c.multiplicity >= a * b, "at " + c.point.representative().to_string());
      ++checked;
    }
  }
  o.detail << " " << checked << " closed points";
  return o;
}

// ---------------------------------------------------------------- 7

// Grows every subspace of F_q^n (q prime) one vector at a time; a subspace
// is the set of its members, vectors packed base q.
std::vector<std::uint64_t> brute_force_subspaces(int n, unsigned q) {
  unsigned size = 1;
  for (int i = 0; i < n; ++i) size *= q;
  auto combine = [&](unsigned a, unsigned b, unsigned c) {
    unsigned r = 0, pw = 1;
    for (int i = 0; i < n; ++i) {
      r += ((a % q + (b % q) * c) % q) * pw;
      a /= q;
      b /= q;
      pw *= q;
    }
    return r;
  };
  using Members = std::vector<bool>;
  std::vector<std::set<Members>> by_dim(static_cast<std::size_t>(n + 1));
  Members zero(size, false);
  zero[0] = true;
  by_dim[0].insert(zero);
  for (int d = 0; d < n; ++d)
    for (const auto& S : by_dim[static_cast<std::size_t>(d)])
      for (unsigned v = 1; v < size; ++v) {
        if (S[v]) continue;
        Members T = S;
        for (unsigned s = 0; s < size; ++s)
          if (S[s])
            for (unsigned c = 1; c < q; ++c) T[combine(s, v, c)] = true;
        by_dim[static_cast<std::size_t>(d + 1)].insert(T);
      }
  std::vector<std::uint64_t> out;
  for (auto& s : by_dim) out.push_back(s.size());
  return out;
}

Outcome gaussian() {
  Outcome o;
  std::size_t cases = 0;
  for (unsigned q : {2u, 3u})
    for (int n = 0; n <= 4; ++n) {
      const auto brute = brute_force_subspaces(n, q);
      for (int r = 0; r <= n; ++r, ++cases)
        o.require(gaussian_count(r, n, q) == brute[static_cast<std::size_t>(r)],
                  "q=" + std::to_string(q) + " n=" + std::to_string(n) + " r=" + std::to_string(r));
    }
  o.detail << " " << cases << " (q,n,r) triples";
  return o;
}

// ---------------------------------------------------------------- 8

Outcome fulton() {
  Outcome o;
  std::size_t curves = 0, singular = 0;
  std::uint64_t seed = kSeed + 8;
  for (auto q : {"2", "3", "5", "2^2", "7"}) {
    CorpusConfig cfg;
    cfg.field = q;
    cfg.n = 2;
    cfg.delta_min = 2;
    cfg.delta_max = 6;
    cfg.count = 20;
    cfg.seed = seed++;
    cfg.random_singular_point = true;
    for (auto& X : generate_corpus(cfg).members) {
      auto r = fulton_check(X, true);
      o.require(r.ok, X.f.to_string());
      singular += *r.closed_sum > 0;
      ++curves;
    }
  }
  std::size_t equalities = 0;
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    auto F = gf::field_create(p, 1);
    for (int delta = 2; static_cast<std::uint32_t>(delta) <= p + 1; ++delta) {
      auto r = fulton_check(HypersurfaceScheme::make(concurrent_lines(delta, 2, F)), true);
      o.require(*r.closed_sum == r.bound, "concurrent lines delta=" + std::to_string(delta));
      ++equalities;
    }
  }
  o.require(curves == 100, "curve count");
  o.detail << " " << curves << " curves (" << singular << " singular), equality on " << equalities << " line families";
  return o;
}

// ---------------------------------------------------------------- 10

Outcome properties() {
  Outcome o;
  std::mt19937_64 rng(kSeed + 10);
  std::size_t field_cases = 0, hasse_cases = 0, shift_cases = 0, spair_cases = 0, tree_cases = 0;

  // field axioms against schoolbook polynomial arithmetic mod the modulus
  for (auto spec : {"2", "3", "7", "2^3", "3^2", "5^2", "2^5"}) {
    auto F = gf::parse_field(spec);
    auto naive_mul = [&](Elem a, Elem b) {
      auto x = F->coeffs(a), y = F->coeffs(b);
      std::vector<std::uint32_t> z(x.size() + y.size(), 0);
      for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) z[i + j] = (z[i + j] + x[i] * y[j]) % F->p();
      return F->from_coeffs(z);
    };
    auto naive_add = [&](Elem a, Elem b) {
      auto x = F->coeffs(a), y = F->coeffs(b);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = (x[i] + y[i]) % F->p();
      return F->from_coeffs(x);
    };
    for (int i = 0; i < 200; ++i, ++field_cases) {
      auto a = testsupport::random_elem(*F, rng), b = testsupport::random_elem(*F, rng), c = testsupport::random_elem(*F, rng);
      o.require(F->mul(a, b) == naive_mul(a, b) && F->add(a, b) == naive_add(a, b), std::string("field ops in ") + spec);
      o.require(F->mul(a, F->add(b, c)) == F->add(F->mul(a, b), F->mul(a, c)), "distributivity");
      o.require(F->mul(F->mul(a, b), c) == F->mul(a, F->mul(b, c)), "associativity");
      if (a.v) o.require(F->mul(a, F->inv(a)) == F->one(), "inverse");
    }
  }

  // Taylor expansion through Hasse derivatives, evaluated over F_{q^2}
  for (auto spec : {"2", "3", "5", "2^2"}) {
    auto F = gf::parse_field(spec);
    auto E = gf::extension(*F, 2);
    for (int i = 0; i < 250; ++i, ++hasse_cases) {
      const int n = 2 + static_cast<int>(rng() % 3), d = 1 + static_cast<int>(rng() % 4);
      auto f = testsupport::random_homogeneous(F, n, d, rng);
      auto fe = f.over(E);
      auto t = testsupport::random_vector(*E, static_cast<std::size_t>(n), rng);
      auto s = testsupport::random_vector(*E, static_cast<std::size_t>(n), rng);
      std::vector<Elem> ts(t.size());
      for (std::size_t j = 0; j < t.size(); ++j) ts[j] = E->add(t[j], s[j]);
      Elem rhs = fe.eval(t);
      for (int a = 1; a <= d; ++a)
        for (auto& [I, g] : hasse_expand(f, a).entries) {
          Elem sI = E->one();
          for (int j = 0; j < n; ++j) sI = E->mul(sI, E->pow(s[static_cast<std::size_t>(j)], I.e[static_cast<std::size_t>(j)]));
          rhs = E->add(rhs, E->mul(g.over(E).eval(t), sI));
        }
      o.require(fe.eval(ts) == rhs, "Taylor identity for " + f.to_string());
    }
  }

  // translations compose and agree with evaluation
  for (auto spec : {"2", "3", "5", "3^2"}) {
    auto F = gf::parse_field(spec);
    for (int i = 0; i < 250; ++i, ++shift_cases) {
      const int n = 1 + static_cast<int>(rng() % 4);
      auto g = testsupport::random_poly(F, n, 5, rng);
      auto a = testsupport::random_vector(*F, static_cast<std::size_t>(n), rng);
      auto b = testsupport::random_vector(*F, static_cast<std::size_t>(n), rng);
      auto x = testsupport::random_vector(*F, static_cast<std::size_t>(n), rng);
      std::vector<Elem> ab(a.size()), xa(a.size());
      for (std::size_t j = 0; j < a.size(); ++j) {
        ab[j] = F->add(a[j], b[j]);
        xa[j] = F->add(x[j], a[j]);
      }
      o.require(shift(shift(g, a), b) == shift(g, ab), "shift composition");
      o.require(shift(g, a).eval(x) == g.eval(xa), "shift evaluation");
    }
  }

  // every S-pair of a computed basis reduces to zero; so does every input
  for (auto spec : {"2", "3", "5", "7"}) {
    auto F = gf::parse_field(spec);
    for (int i = 0; i < 250; ++i, ++spair_cases) {
      const int nv = 2 + static_cast<int>(rng() % 2);
      std::vector<MPoly> gens;
      for (int j = 0, c = 1 + static_cast<int>(rng() % 3); j < c; ++j)
        gens.push_back(testsupport::random_homogeneous(F, nv, 1 + static_cast<int>(rng() % 3), rng, 40));
      auto G = buchberger(gens, rng() % 2 ? MonomialOrder::grevlex(nv) : MonomialOrder::lex(nv));
      for (auto& g : gens) o.require(gb_contains(G, g), "input generator not in its basis");
      for (std::size_t a = 0; a < G.generators.size(); ++a)
        for (std::size_t b = a + 1; b < G.generators.size(); ++b)
          o.require(gb_reduce(s_polynomial(G.generators[a], G.generators[b], G.order), G).is_zero(), "S-pair remainder");
    }
  }

  // vertex weights multiply along paths; scheme weights add over occurrences
  std::function<TreeVertex(int)> random_vertex = [&](int depth) {
    TreeVertex v;
    v.scheme = SchemeDescriptor::registered("Z" + std::to_string(rng() % 5), depth, 1);
    v.edge_weight = 1 + rng() % 4;
    if (depth > 0)
      for (int c = static_cast<int>(rng() % 4); c > 0; --c) v.children.push_back(random_vertex(depth - 1));
    return v;
  };
  for (int i = 0; i < 1000; ++i, ++tree_cases) {
    IntersectionTree t;
    t.root = random_vertex(4);
    const auto Z = SchemeDescriptor::registered("Z" + std::to_string(rng() % 5), 0, 1);
    std::uint64_t expected = 0;
    std::function<void(const TreeVertex&, std::uint64_t, VertexPath&)> visit = [&](const TreeVertex& v, std::uint64_t w,
                                                                                   VertexPath& path) {
      o.require(vertex_weight(t, path) == w, "vertex weight");
      if (v.scheme.name == Z.name) expected += w;
      for (std::size_t c = 0; c < v.children.size(); ++c) {
        path.push_back(c);
        visit(v.children[c], w * v.children[c].edge_weight, path);
        path.pop_back();
      }
    };
    VertexPath path;
    visit(t.root, 1, path);
    o.require(scheme_weight(t, Z) == expected, "scheme weight");
  }

  o.require(field_cases >= 1000 && hasse_cases >= 1000 && shift_cases >= 1000 && spair_cases >= 1000 && tree_cases >= 1000,
            "case counts");
  o.detail << " field " << field_cases << ", Hasse " << hasse_cases << ", translation " << shift_cases << ", S-pair "
           << spair_cases << ", tree " << tree_cases;
  return o;
}

}  // namespace

int main() {
  bool all = true;
  auto report = [&](int n, const char* title, const std::function<Outcome()>& run) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    all = all && o.pass;
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  " << title << " [" << seconds_since(t0)
              << " s]" << o.detail.str() << std::endl;
  };

  SweepCorpus corpus;
  std::vector<PairResult> pairs;
  report(1, "worked P^4 example", fixture);
  report(2, "main bound on seeded reduced hypersurfaces", [&] {
    corpus = sweep_corpus();
    return main_sweep(corpus);
  });
  report(3, "cylinder exact values", cylinders);
  report(4, "Bezout on plane curve pairs", [&] {
    pairs = bezout_pairs();
    return bezout(pairs);
  });
  report(5, "Hilbert-Samuel formula against rank oracle", [&] { return hilbert_samuel_check(corpus); });
  report(6, "translation and derived-order multiplicities agree", [&] { return dual_algorithms(corpus); });
  report(7, "Gaussian counts against brute force", gaussian);
  report(8, "plane-curve bound over closed points", fulton);
  report(9, "intersection number at least product of multiplicities", [&] { return product_bound(pairs); });
  report(10, "property suites", properties);
  return all ? 0 : 1;
}

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hypmult/linalg.hpp"
#include "hypmult/mpoly.hpp"
#include "hypmult/point.hpp"

namespace testsupport {

using hypmult::Elem;
using hypmult::Field;
using hypmult::FieldPtr;
using hypmult::Monomial;
using hypmult::MPoly;

inline constexpr std::uint64_t kSeed = 0x5eed'1234'abcdULL;

inline std::uint64_t below(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

inline Elem random_elem(const Field& F, std::mt19937_64& rng) { return Elem{static_cast<std::uint32_t>(below(rng, F.q()))}; }

inline Elem random_nonzero(const Field& F, std::mt19937_64& rng) {
  return Elem{static_cast<std::uint32_t>(1 + below(rng, F.q() - 1))};
}

inline std::vector<Elem> random_vector(const Field& F, std::size_t n, std::mt19937_64& rng) {
  std::vector<Elem> v(n);
  for (auto& x : v) x = random_elem(F, rng);
  return v;
}

/// Homogeneous of exactly the given degree (at least one term), each
/// monomial kept with probability keep_percent.
inline MPoly random_homogeneous(const FieldPtr& field, int nvars, int degree, std::mt19937_64& rng,
                                int keep_percent = 50) {
  auto mons = hypmult::monomials_of_degree(nvars, degree);
  for (;;) {
    std::vector<MPoly::Term> terms;
    for (auto& m : mons)
      if (static_cast<int>(below(rng, 100)) < keep_percent) terms.push_back({m, random_nonzero(*field, rng)});
    auto f = MPoly::from_terms(field, nvars, std::move(terms));
    if (!f.is_zero()) return f;
  }
}

/// Arbitrary polynomial of total degree at most max_degree.
inline MPoly random_poly(const FieldPtr& field, int nvars, int max_degree, std::mt19937_64& rng, int terms = 6) {
  std::vector<MPoly::Term> out;
  for (int i = 0; i < terms; ++i) {
    Monomial m;
    int left = static_cast<int>(below(rng, static_cast<std::uint64_t>(max_degree) + 1));
    for (int j = 0; j < nvars && left > 0; ++j) {
      const int e = j == nvars - 1 ? left : static_cast<int>(below(rng, static_cast<std::uint64_t>(left) + 1));
      m.e[static_cast<std::size_t>(j)] = static_cast<std::uint16_t>(e);
      left -= e;
    }
    out.push_back({m, random_nonzero(*field, rng)});
  }
  return MPoly::from_terms(field, nvars, std::move(out));
}

/// f(L_0, ..., L_n) for polynomials L_i, by plain ring arithmetic.
inline MPoly substitute(const MPoly& f, const std::vector<MPoly>& L) {
  MPoly out(L.front().field(), L.front().nvars());
  for (auto& t : f.terms()) {
    MPoly m = MPoly::constant(L.front().field(), L.front().nvars(), t.c);
    for (std::size_t i = 0; i < L.size(); ++i)
      if (t.m.e[i]) m = m * L[i].pow(t.m.e[i]);
    out = out + m;
  }
  return out;
}

/// A hypersurface together with a rational point of known multiplicity.
struct Planted {
  MPoly f;
  hypmult::ProjPoint point;
  int mu = 0;
};

/// T0^(delta-j) * h_j(T1..Tn) summed over j = r..delta with h_r != 0 has
/// multiplicity exactly r at [1:0:...:0]; a random invertible linear change
/// of coordinates moves that point to the common zero of rows 1..n.
inline Planted planted_point(const FieldPtr& field, int n, int delta, int r, std::mt19937_64& rng, int keep = 60) {
  const Field& F = *field;
  const int nv = n + 1;
  MPoly g(field, nv);
  for (int j = r; j <= delta; ++j) {
    if (j > r && below(rng, 2) == 0) continue;
    std::vector<MPoly::Term> h;
    for (;;) {
      h.clear();
      for (auto& m : hypmult::monomials_of_degree(nv, j)) {
        if (m.e[0]) continue;
        if (static_cast<int>(below(rng, 100)) < keep) h.push_back({m, random_nonzero(F, rng)});
      }
      if (!h.empty() || j == 0) break;
    }
    g = g + MPoly::from_terms(field, nv, std::move(h)).mul_term(Monomial::var(0, delta - j), F.one());
  }
  hypmult::linalg::Matrix A;
  for (;;) {
    A.assign(static_cast<std::size_t>(nv), {});
    for (auto& row : A) row = random_vector(F, static_cast<std::size_t>(nv), rng);
    if (hypmult::linalg::rank(F, A) == static_cast<std::size_t>(nv)) break;
  }
  std::vector<MPoly> L;
  for (auto& row : A) {
    MPoly l(field, nv);
    for (int i = 0; i < nv; ++i)
      if (row[static_cast<std::size_t>(i)].v) l = l + MPoly::variable(field, nv, i).scale(row[static_cast<std::size_t>(i)]);
    L.push_back(l);
  }
  hypmult::linalg::Matrix rest(A.begin() + 1, A.end());
  auto ker = hypmult::linalg::kernel(F, rest, static_cast<std::size_t>(nv));
  return {substitute(g, L), hypmult::ProjPoint::make(field, ker.front()), r};
}

}  // namespace testsupport

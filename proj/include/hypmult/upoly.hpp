#pragma once

// Dense univariate polynomials over a finite field: Euclid, modular powers,
// distinct-degree factorization and root extraction.

#include <utility>
#include <vector>

#include "gf.hpp"

namespace hypmult::upoly {

using gf::Elem;
using gf::Field;

/// Little-endian coefficients; the zero polynomial is empty.
using Poly = std::vector<Elem>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back().v == 0) a.pop_back();
}

inline int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

inline Poly add(const Field& F, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), F.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
  trim(r);
  return r;
}

inline Poly sub(const Field& F, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), F.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.sub(r[i], b[i]);
  trim(r);
  return r;
}

inline Poly mul(const Field& F, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, F.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].v == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  trim(r);
  return r;
}

inline Poly scale(const Field& F, const Poly& a, Elem c) {
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.mul(a[i], c);
  trim(r);
  return r;
}

inline Poly monic(const Field& F, const Poly& a) {
  if (a.empty()) return a;
  return scale(F, a, F.inv(a.back()));
}

/// Returns (quotient, remainder).
inline std::pair<Poly, Poly> divmod(const Field& F, Poly a, const Poly& b) {
  if (b.empty()) throw error("polynomial division by zero");
  trim(a);
  if (a.size() < b.size()) return {{}, a};
  Poly q(a.size() - b.size() + 1, F.zero());
  const Elem lead_inv = F.inv(b.back());
  while (!a.empty() && a.size() >= b.size()) {
    const std::size_t shift = a.size() - b.size();
    const Elem c = F.mul(a.back(), lead_inv);
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = F.sub(a[shift + i], F.mul(c, b[i]));
    trim(a);
  }
  trim(q);
  return {q, a};
}

inline Poly rem(const Field& F, const Poly& a, const Poly& b) { return divmod(F, a, b).second; }

/// Monic gcd; gcd(0, 0) = 0.
inline Poly gcd(const Field& F, Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    a = rem(F, a, b);
    std::swap(a, b);
  }
  return monic(F, a);
}

inline Poly mulmod(const Field& F, const Poly& a, const Poly& b, const Poly& m) {
  return rem(F, mul(F, a, b), m);
}

inline Poly powmod(const Field& F, Poly base, std::uint64_t e, const Poly& m) {
  Poly acc{F.one()};
  acc = rem(F, acc, m);
  base = rem(F, base, m);
  while (e) {
    if (e & 1) acc = mulmod(F, acc, base, m);
    e >>= 1;
    if (e) base = mulmod(F, base, base, m);
  }
  return acc;
}

inline Elem eval(const Field& F, const Poly& a, Elem x) {
  Elem acc = F.zero();
  for (std::size_t i = a.size(); i-- > 0;) acc = F.add(F.mul(acc, x), a[i]);
  return acc;
}

/// Image of a polynomial under a field embedding.
inline Poly map(const gf::Embedding& phi, const Poly& a) {
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = phi(a[i]);
  return r;
}

/// Splits the radical of a nonzero polynomial by degree of irreducible
/// factors: returns (d, product of the distinct monic irreducible factors
/// of degree d) for each d that occurs, in increasing d.
inline std::vector<std::pair<int, Poly>> distinct_degree(const Field& F, const Poly& input) {
  std::vector<std::pair<int, Poly>> out;
  Poly f = monic(F, input);
  if (degree(f) < 1) return out;
  const Poly x{F.zero(), F.one()};
  Poly h = rem(F, x, f);
  auto strip = [&](const Poly& g) {
    for (;;) {
      Poly t = gcd(F, f, g);
      if (degree(t) < 1) break;
      f = divmod(F, f, t).first;
    }
  };
  for (int d = 1; degree(f) >= 1; ++d) {
    if (degree(f) < 2 * d) {
      // no repeated factor and no two factors fit: f is irreducible
      out.emplace_back(degree(f), f);
      break;
    }
    h = powmod(F, h, F.q(), f);
    Poly g = gcd(F, f, sub(F, h, x));
    if (degree(g) >= 1) {
      out.emplace_back(d, g);
      strip(g);
      if (degree(f) >= 1) h = rem(F, h, f);
    }
  }
  return out;
}

/// All roots in F of a nonzero polynomial whose radical splits into linear
/// factors over F.  Roots are distinct and sorted by index.
inline std::vector<Elem> split_roots(const Field& F, const Poly& input) {
  std::vector<Elem> roots;
  Poly f = monic(F, input);
  if (degree(f) < 1) return roots;
  // radical part over F: gcd with x^q - x
  const Poly x{F.zero(), F.one()};
  f = gcd(F, f, sub(F, powmod(F, x, F.q(), f), x));
  std::vector<Poly> stack{f};
  std::uint32_t shift = 0;
  while (!stack.empty()) {
    Poly g = std::move(stack.back());
    stack.pop_back();
    if (degree(g) < 1) continue;
    if (degree(g) == 1) {
      roots.push_back(F.neg(g[0]));
      continue;
    }
    // odd p: probe with x + a; p = 2: trace of c*x.  a and c run through F
    // in index order.
    for (;; ++shift) {
      Poly probe;
      if (F.p() == 2) {
        const Poly cx{F.zero(), Elem{1 + shift % (F.q() - 1)}};
        Poly t = rem(F, cx, g), acc = t;
        for (int i = 1; i < F.k(); ++i) {
          t = mulmod(F, t, t, g);
          acc = add(F, acc, t);
        }
        probe = acc;
      } else {
        const Poly xa{Elem{shift % F.q()}, F.one()};
        probe = sub(F, powmod(F, xa, (F.q() - 1) / 2, g), Poly{F.one()});
      }
      Poly d = gcd(F, g, probe);
      if (degree(d) >= 1 && degree(d) < degree(g)) {
        stack.push_back(divmod(F, g, d).first);
        stack.push_back(d);
        ++shift;
        break;
      }
      if (shift > 4 * F.q() + 64) {
        // every probe failed to split: fall back to exhaustive evaluation
        for (std::uint32_t v = 0; v < F.q(); ++v)
          if (eval(F, g, Elem{v}).v == 0) roots.push_back(Elem{v});
        break;
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

}  // namespace hypmult::upoly

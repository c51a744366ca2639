#pragma once

// Sparse multivariate polynomials over F_q.
//
// Terms are kept sorted by the graded lexicographic order, largest first,
// with no zero coefficients, so structural equality is polynomial equality.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gf.hpp"
#include "linalg.hpp"
#include "point.hpp"

namespace hypmult {

inline constexpr int kMaxVars = 8;

struct Monomial {
  std::array<std::uint16_t, kMaxVars> e{};

  int degree() const {
    int d = 0;
    for (auto x : e) d += x;
    return d;
  }
  bool divides(const Monomial& o) const {
    for (int i = 0; i < kMaxVars; ++i)
      if (e[i] > o.e[i]) return false;
    return true;
  }
  Monomial operator*(const Monomial& o) const {
    Monomial r;
    for (int i = 0; i < kMaxVars; ++i) {
      const unsigned s = unsigned(e[i]) + o.e[i];
      if (s > 0xffffu) throw limit_error("exponent overflow");
      r.e[i] = static_cast<std::uint16_t>(s);
    }
    return r;
  }
  /// this / o, assuming o divides this.
  Monomial operator/(const Monomial& o) const {
    Monomial r;
    for (int i = 0; i < kMaxVars; ++i) r.e[i] = static_cast<std::uint16_t>(e[i] - o.e[i]);
    return r;
  }
  static Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (int i = 0; i < kMaxVars; ++i) r.e[i] = std::max(a.e[i], b.e[i]);
    return r;
  }
  static Monomial var(int i, int power = 1) {
    Monomial m;
    m.e[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(power);
    return m;
  }
  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend bool operator<(const Monomial& a, const Monomial& b) { return a.e < b.e; }
};

/// Graded lexicographic comparison with T0 > T1 > ...
inline bool grlex_greater(const Monomial& a, const Monomial& b) {
  const int da = a.degree(), db = b.degree();
  if (da != db) return da > db;
  return a.e > b.e;
}

/// All exponent vectors in nvars variables of total degree d, in graded
/// lexicographic order (largest first).
inline std::vector<Monomial> monomials_of_degree(int nvars, int d) {
  std::vector<Monomial> out;
  Monomial cur;
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == nvars - 1) {
      cur.e[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(left);
      out.push_back(cur);
      return;
    }
    for (int x = left; x >= 0; --x) {
      cur.e[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(x);
      rec(i + 1, left - x);
    }
    cur.e[static_cast<std::size_t>(i)] = 0;
  };
  if (nvars == 0) {
    if (d == 0) out.push_back(cur);
    return out;
  }
  rec(0, d);
  return out;
}

/// C(n, k) mod p by Lucas' theorem.
inline std::uint32_t binomial_mod(std::uint64_t n, std::uint64_t k, std::uint32_t p) {
  if (k > n) return 0;
  std::uint64_t result = 1;
  while (n || k) {
    const std::uint64_t a = n % p, b = k % p;
    if (b > a) return 0;
    std::uint64_t num = 1, den = 1;
    for (std::uint64_t i = 0; i < b; ++i) {
      num = num * ((a - i) % p) % p;
      den = den * ((i + 1) % p) % p;
    }
    result = result * num % p * gf::detail::inv_mod(static_cast<std::uint32_t>(den), p) % p;
    n /= p;
    k /= p;
  }
  return static_cast<std::uint32_t>(result);
}

class MPoly {
 public:
  struct Term {
    Monomial m;
    Elem c;
    friend bool operator==(const Term&, const Term&) = default;
  };

  MPoly() = default;
  MPoly(FieldPtr field, int nvars) : field_(std::move(field)), nvars_(nvars) {
    if (nvars < 0 || nvars > kMaxVars) throw limit_error("at most 8 variables are supported");
  }

  /// Sums like terms and drops zeros.
  static MPoly from_terms(FieldPtr field, int nvars, std::vector<Term> terms) {
    MPoly r(std::move(field), nvars);
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return grlex_greater(a.m, b.m); });
    const Field& F = *r.field_;
    for (auto& t : terms) {
      if (!r.terms_.empty() && r.terms_.back().m == t.m) {
        r.terms_.back().c = F.add(r.terms_.back().c, t.c);
        if (r.terms_.back().c.v == 0) r.terms_.pop_back();
      } else if (t.c.v != 0) {
        r.terms_.push_back(t);
      }
    }
    return r;
  }

  static MPoly constant(FieldPtr field, int nvars, Elem c) {
    return from_terms(std::move(field), nvars, {{Monomial{}, c}});
  }
  static MPoly variable(FieldPtr field, int nvars, int i) {
    const Elem one = field->one();
    return from_terms(std::move(field), nvars, {{Monomial::var(i), one}});
  }
  static MPoly monomial(FieldPtr field, int nvars, const Monomial& m, Elem c) {
    return from_terms(std::move(field), nvars, {{m, c}});
  }

  const FieldPtr& field() const { return field_; }
  const Field& F() const { return *field_; }
  int nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const Term& leading() const { return terms_.front(); }

  /// -1 for the zero polynomial.
  int total_degree() const {
    int d = -1;
    for (auto& t : terms_) d = std::max(d, t.m.degree());
    return d;
  }

  int lowest_degree() const {
    if (terms_.empty()) throw error("lowest degree of the zero polynomial");
    int d = terms_.front().m.degree();
    for (auto& t : terms_) d = std::min(d, t.m.degree());
    return d;
  }

  bool is_homogeneous() const {
    for (auto& t : terms_)
      if (t.m.degree() != terms_.front().m.degree()) return false;
    return true;
  }

  MPoly homogeneous_part(int d) const {
    MPoly r(field_, nvars_);
    for (auto& t : terms_)
      if (t.m.degree() == d) r.terms_.push_back(t);
    return r;
  }

  Elem coeff(const Monomial& m) const {
    for (auto& t : terms_)
      if (t.m == m) return t.c;
    return F().zero();
  }

  /// Largest exponent of variable i.
  int degree_in(int i) const {
    int d = 0;
    for (auto& t : terms_) d = std::max(d, int(t.m.e[static_cast<std::size_t>(i)]));
    return d;
  }

  Elem eval(std::span<const Elem> x) const {
    if (static_cast<int>(x.size()) != nvars_) throw error("evaluation point has wrong arity");
    const Field& f = F();
    Elem acc = f.zero();
    for (auto& t : terms_) {
      Elem v = t.c;
      for (int i = 0; i < nvars_ && v.v != 0; ++i)
        if (t.m.e[static_cast<std::size_t>(i)]) v = f.mul(v, f.pow(x[static_cast<std::size_t>(i)], t.m.e[static_cast<std::size_t>(i)]));
      acc = f.add(acc, v);
    }
    return acc;
  }

  MPoly partial(int i) const {
    std::vector<Term> out;
    const Field& f = F();
    for (auto& t : terms_) {
      const auto e = t.m.e[static_cast<std::size_t>(i)];
      if (e == 0) continue;
      const Elem c = f.mul(t.c, f.from_int(e));
      if (c.v == 0) continue;
      Monomial m = t.m;
      --m.e[static_cast<std::size_t>(i)];
      out.push_back({m, c});
    }
    return from_terms(field_, nvars_, std::move(out));
  }

  MPoly operator-() const {
    MPoly r = *this;
    for (auto& t : r.terms_) t.c = F().neg(t.c);
    return r;
  }

  MPoly operator+(const MPoly& o) const { return merge(o, false); }
  MPoly operator-(const MPoly& o) const { return merge(o, true); }

  MPoly operator*(const MPoly& o) const {
    check_compatible(o);
    if (is_zero() || o.is_zero()) return MPoly(field_, nvars_);
    std::vector<Term> out;
    out.reserve(terms_.size() * o.terms_.size());
    const Field& f = F();
    for (auto& a : terms_)
      for (auto& b : o.terms_) out.push_back({a.m * b.m, f.mul(a.c, b.c)});
    return from_terms(field_, nvars_, std::move(out));
  }

  MPoly scale(Elem c) const {
    if (c.v == 0) return MPoly(field_, nvars_);
    MPoly r = *this;
    for (auto& t : r.terms_) t.c = F().mul(t.c, c);
    return r;
  }

  MPoly mul_term(const Monomial& m, Elem c) const {
    if (c.v == 0) return MPoly(field_, nvars_);
    MPoly r = *this;
    for (auto& t : r.terms_) {
      t.m = t.m * m;
      t.c = F().mul(t.c, c);
    }
    return r;
  }

  MPoly pow(unsigned e) const {
    MPoly acc = constant(field_, nvars_, F().one());
    for (unsigned i = 0; i < e; ++i) acc = acc * *this;
    return acc;
  }

  /// Coefficients pushed through a field embedding.
  MPoly map(const gf::Embedding& phi) const {
    MPoly r(phi.target(), nvars_);
    r.terms_ = terms_;
    for (auto& t : r.terms_) t.c = phi(t.c);
    return r;
  }

  /// The same polynomial over an extension of its field.
  MPoly over(const FieldPtr& target) const {
    if (field_->same_as(*target)) return *this;
    return map(gf::embed_build(field_, target));
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      const auto& t = terms_[k];
      if (k) s += " + ";
      const bool is_const = t.m.degree() == 0;
      bool need_star = false;
      if (is_const || t.c.v != 1) {
        s += F().to_string(t.c);
        need_star = true;
      }
      for (int i = 0; i < nvars_; ++i) {
        const auto e = t.m.e[static_cast<std::size_t>(i)];
        if (!e) continue;
        if (need_star) s += '*';
        s += 'T' + std::to_string(i);
        if (e > 1) s += '^' + std::to_string(e);
        need_star = true;
      }
    }
    return s;
  }

  friend bool operator==(const MPoly& a, const MPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_ &&
           (a.field_ == b.field_ || (a.field_ && b.field_ && a.field_->same_as(*b.field_)));
  }

 private:
  void check_compatible(const MPoly& o) const {
    if (nvars_ != o.nvars_) throw error("polynomial arity mismatch");
    if (!field_->same_as(*o.field_)) throw error("polynomials over different fields");
  }

  MPoly merge(const MPoly& o, bool subtract) const {
    check_compatible(o);
    const Field& f = F();
    MPoly r(field_, nvars_);
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
      if (j == o.terms_.size() || (i < terms_.size() && grlex_greater(terms_[i].m, o.terms_[j].m))) {
        r.terms_.push_back(terms_[i++]);
      } else if (i == terms_.size() || grlex_greater(o.terms_[j].m, terms_[i].m)) {
        Term t = o.terms_[j++];
        if (subtract) t.c = f.neg(t.c);
        r.terms_.push_back(t);
      } else {
        const Elem c = subtract ? f.sub(terms_[i].c, o.terms_[j].c) : f.add(terms_[i].c, o.terms_[j].c);
        if (c.v != 0) r.terms_.push_back({terms_[i].m, c});
        ++i;
        ++j;
      }
    }
    return r;
  }

  FieldPtr field_;
  int nvars_ = 0;
  std::vector<Term> terms_;
};

/// Parses the polynomial text format: terms like "3*T0^2*T1", "[1,2]*T3",
/// "T2", "4", joined by '+' or '-'.  A leading sign is accepted.
inline MPoly poly_parse(std::string_view text, const FieldPtr& field, int nvars) {
  const Field& F = *field;
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto at = [&](char c) {
    skip();
    return pos < text.size() && text[pos] == c;
  };
  auto number = [&]() -> unsigned {
    skip();
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      throw parse_error("expected digits", pos);
    unsigned long v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + static_cast<unsigned long>(text[pos] - '0');
      if (v > 0xffffu) throw parse_error("number too large", pos);
      ++pos;
    }
    return static_cast<unsigned>(v);
  };
  auto factor = [&](Monomial& m) {
    skip();
    if (pos >= text.size() || text[pos] != 'T') throw parse_error("expected variable 'T<index>'", pos);
    ++pos;
    const std::size_t var_pos = pos;
    const unsigned idx = number();
    if (static_cast<int>(idx) >= nvars)
      throw parse_error("variable T" + std::to_string(idx) + " out of range for " + std::to_string(nvars) + " variables",
                        var_pos);
    unsigned e = 1;
    if (at('^')) {
      ++pos;
      e = number();
    }
    const unsigned s = m.e[idx] + e;
    if (s > 0xffffu) throw parse_error("exponent too large", pos);
    m.e[idx] = static_cast<std::uint16_t>(s);
  };

  std::vector<MPoly::Term> terms;
  bool negate = false;
  if (at('-')) {
    negate = true;
    ++pos;
  } else if (at('+')) {
    ++pos;
  }
  for (;;) {
    skip();
    Elem c = F.one();
    Monomial m;
    const bool has_coeff =
        pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '[');
    bool need_factor = !has_coeff;
    if (has_coeff) {
      c = gf::parse_element(text, pos, F);
      if (at('*')) {
        ++pos;
        need_factor = true;
      } else if (at('T')) {
        need_factor = true;
      }
    }
    if (need_factor) {
      factor(m);
      while (at('*')) {
        ++pos;
        factor(m);
      }
    }
    terms.push_back({m, negate ? F.neg(c) : c});
    skip();
    if (pos == text.size()) break;
    if (text[pos] == '+' || text[pos] == '-') {
      negate = text[pos] == '-';
      ++pos;
      continue;
    }
    throw parse_error(std::string("unexpected character '") + text[pos] + "'", pos);
  }
  return MPoly::from_terms(field, nvars, std::move(terms));
}

/// Coefficient of S^I in g(T + S): sum over E >= I of c_E * prod C(e_j, i_j) T^(E - I).
inline MPoly hasse_coefficient(const MPoly& g, const Monomial& I) {
  const Field& F = g.F();
  std::vector<MPoly::Term> out;
  for (auto& t : g.terms()) {
    if (!I.divides(t.m)) continue;
    std::uint64_t b = 1;
    for (int j = 0; j < g.nvars() && b; ++j)
      b = b * binomial_mod(t.m.e[static_cast<std::size_t>(j)], I.e[static_cast<std::size_t>(j)], F.p()) % F.p();
    if (b == 0) continue;
    out.push_back({t.m / I, F.mul(t.c, F.from_int(static_cast<std::int64_t>(b)))});
  }
  return MPoly::from_terms(g.field(), g.nvars(), std::move(out));
}

/// The order-alpha coefficient polynomials g^I (|I| = alpha) of a
/// homogeneous polynomial, with the indices of the vanishing ones and a
/// row-reduced basis of their span.
struct DerivedSet {
  int order = 0;
  int nvars = 0;
  std::map<Monomial, MPoly> entries;
  std::vector<Monomial> zero_indices;
  std::vector<MPoly> basis;

  /// Index present in either table; returns nullptr when g^I = 0.
  const MPoly* find(const Monomial& I) const {
    auto it = entries.find(I);
    return it == entries.end() ? nullptr : &it->second;
  }
  bool is_zero(const Monomial& I) const { return find(I) == nullptr; }
};

/// Coefficient vectors of polynomials over a common monomial list.
inline linalg::Matrix coefficient_matrix(const std::vector<MPoly>& polys, const std::vector<Monomial>& cols) {
  std::map<Monomial, std::size_t> index;
  for (std::size_t i = 0; i < cols.size(); ++i) index[cols[i]] = i;
  linalg::Matrix m;
  for (auto& p : polys) {
    linalg::Row row(cols.size(), p.F().zero());
    for (auto& t : p.terms()) row[index.at(t.m)] = t.c;
    m.push_back(std::move(row));
  }
  return m;
}

inline DerivedSet hasse_expand(const MPoly& f, int alpha) {
  if (f.is_zero() || !f.is_homogeneous()) throw error("derived set needs a nonzero homogeneous polynomial");
  const int delta = f.total_degree();
  if (alpha < 1 || alpha > delta)
    throw error("derivation order " + std::to_string(alpha) + " outside 1.." + std::to_string(delta));
  DerivedSet out;
  out.order = alpha;
  out.nvars = f.nvars();
  std::vector<MPoly> nonzero;
  for (auto& I : monomials_of_degree(f.nvars(), alpha)) {
    MPoly g = hasse_coefficient(f, I);
    if (g.is_zero()) {
      out.zero_indices.push_back(I);
    } else {
      nonzero.push_back(g);
      out.entries.emplace(I, std::move(g));
    }
  }
  if (!nonzero.empty()) {
    const auto cols = monomials_of_degree(f.nvars(), delta - alpha);
    auto m = coefficient_matrix(nonzero, cols);
    linalg::rref(f.F(), m);
    for (auto& row : m) {
      std::vector<MPoly::Term> terms;
      for (std::size_t j = 0; j < cols.size(); ++j)
        if (row[j].v) terms.push_back({cols[j], row[j]});
      out.basis.push_back(MPoly::from_terms(f.field(), f.nvars(), std::move(terms)));
    }
  }
  return out;
}

/// Sets variable `chart` to 1 and drops it; the remaining variables keep
/// their relative order.
inline MPoly dehomogenize(const MPoly& f, int chart) {
  if (chart < 0 || chart >= f.nvars()) throw error("chart index out of range");
  std::vector<MPoly::Term> out;
  for (auto& t : f.terms()) {
    Monomial m;
    for (int i = 0, j = 0; i < f.nvars(); ++i) {
      if (i == chart) continue;
      m.e[static_cast<std::size_t>(j++)] = t.m.e[static_cast<std::size_t>(i)];
    }
    out.push_back({m, t.c});
  }
  return MPoly::from_terms(f.field(), f.nvars() - 1, std::move(out));
}

/// g(x + a).
inline MPoly shift(const MPoly& g, std::span<const Elem> a) {
  if (static_cast<int>(a.size()) != g.nvars()) throw error("shift vector has wrong arity");
  const Field& F = g.F();
  MPoly cur = g;
  for (int i = 0; i < g.nvars(); ++i) {
    const Elem ai = a[static_cast<std::size_t>(i)];
    if (ai.v == 0) continue;
    std::vector<MPoly::Term> out;
    for (auto& t : cur.terms()) {
      const unsigned e = t.m.e[static_cast<std::size_t>(i)];
      for (unsigned j = 0; j <= e; ++j) {
        const std::uint32_t b = binomial_mod(e, j, F.p());
        if (b == 0) continue;
        Monomial m = t.m;
        m.e[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(j);
        out.push_back({m, F.mul(t.c, F.mul(F.from_int(b), F.pow(ai, e - j)))});
      }
    }
    cur = MPoly::from_terms(g.field(), g.nvars(), std::move(out));
  }
  return cur;
}

/// Local equation of f at P in the affine chart T_chart = 1, moved so P
/// sits at the origin.  f is base-changed to P's field when needed.
inline MPoly translate(const MPoly& f, const ProjPoint& P, int chart) {
  if (static_cast<int>(P.coords.size()) != f.nvars()) throw error("point and polynomial arity differ");
  if (chart < 0 || chart >= f.nvars() || P.coords[static_cast<std::size_t>(chart)].v == 0)
    throw error("chart coordinate of the point is zero");
  const Field& F = *P.field;
  const Elem inv = F.inv(P.coords[static_cast<std::size_t>(chart)]);
  std::vector<Elem> a;
  for (int i = 0; i < f.nvars(); ++i)
    if (i != chart) a.push_back(F.mul(P.coords[static_cast<std::size_t>(i)], inv));
  return shift(dehomogenize(f.over(P.field), chart), a);
}

/// f at the normalized representative of P.
inline Elem eval_proj(const MPoly& f, const ProjPoint& P) {
  if (static_cast<int>(P.coords.size()) != f.nvars()) throw error("point and polynomial arity differ");
  return f.over(P.field).eval(P.coords);
}

}  // namespace hypmult

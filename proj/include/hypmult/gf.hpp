#pragma once

// Finite fields F_{p^k} in a polynomial basis over F_p.
//
// An element is packed into one integer: the coefficient vector
// (c_0, ..., c_{k-1}) of c_0 + c_1 T + ... + c_{k-1} T^{k-1} is stored as
// c_0 + c_1 p + ... + c_{k-1} p^{k-1}.  All arithmetic goes through
// exp/log/Zech tables built once per field, so every operation is O(1).

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hypmult {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown on malformed input text (field specs, polynomials, points).
struct parse_error : error {
  parse_error(const std::string& what, std::size_t pos)
      : error(what + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

/// Thrown when a desk-scale cap or budget would be exceeded.
struct limit_error : error {
  using error::error;
};

namespace gf {

inline constexpr std::uint64_t kMaxFieldSize = 1u << 20;
inline constexpr std::uint32_t kMaxCharacteristic = 1u << 16;

struct Elem {
  std::uint32_t v = 0;
  friend constexpr bool operator==(Elem, Elem) = default;
  friend constexpr auto operator<=>(Elem, Elem) = default;
};

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

namespace detail {

// Dense polynomials over F_p, little-endian, used only while choosing a
// modulus and building tables.
using Fp = std::vector<std::uint32_t>;

inline void trim(Fp& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::int64_t t = 0, new_t = 1, r = p, new_r = a % p;
  while (new_r != 0) {
    std::int64_t qt = r / new_r;
    t = std::exchange(new_t, t - qt * new_t);
    r = std::exchange(new_r, r - qt * new_r);
  }
  if (t < 0) t += p;
  return static_cast<std::uint32_t>(t);
}

inline Fp mod(Fp a, const Fp& m, std::uint32_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint32_t lead_inv = inv_mod(m.back(), p);
  while (a.size() >= m.size()) {
    const std::uint64_t c = std::uint64_t(a.back()) * lead_inv % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) {
      a[shift + i] = static_cast<std::uint32_t>(
          (a[shift + i] + std::uint64_t(p - m[i]) * c) % p);
    }
    trim(a);
  }
  return a;
}

inline Fp mul(const Fp& a, const Fp& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Fp r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t(a[i]) * b[j]) % p);
  }
  trim(r);
  return r;
}

inline Fp mulmod(const Fp& a, const Fp& b, const Fp& m, std::uint32_t p) {
  return mod(mul(a, b, p), m, p);
}

inline Fp gcd(Fp a, Fp b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    a = mod(std::move(a), b, p);
    std::swap(a, b);
  }
  return a;
}

// x^(p^e) mod m
inline Fp frobenius_power_of_x(const Fp& m, std::uint32_t p, int e) {
  Fp x = mod(Fp{0, 1}, m, p);
  for (int i = 0; i < e; ++i) {
    Fp base = x, acc{1};
    std::uint64_t ex = p;
    while (ex) {
      if (ex & 1) acc = mulmod(acc, base, m, p);
      base = mulmod(base, base, m, p);
      ex >>= 1;
    }
    x = acc;
  }
  return x;
}

inline Fp digits(std::uint64_t index, std::uint32_t p, int k) {
  Fp out(static_cast<std::size_t>(k), 0);
  for (int i = 0; i < k; ++i) {
    out[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(index % p);
    index /= p;
  }
  return out;
}

inline bool divides(const Fp& d, const Fp& a, std::uint32_t p) { return mod(a, d, p).empty(); }

// Exhaustive factor search: no monic factor of degree 1..k/2.
inline bool irreducible_exhaustive(const Fp& f, std::uint32_t p) {
  const int k = static_cast<int>(f.size()) - 1;
  for (int d = 1; d <= k / 2; ++d) {
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Fp g = digits(idx, p, d);
      g.push_back(1);
      if (divides(g, f, p)) return false;
    }
  }
  return true;
}

// Rabin: f of degree k is irreducible iff x^(p^k) = x mod f and
// gcd(x^(p^(k/r)) - x, f) = 1 for every prime r | k.
inline bool irreducible_rabin(const Fp& f, std::uint32_t p) {
  const int k = static_cast<int>(f.size()) - 1;
  auto x_minus = [&](Fp v) {
    if (v.size() < 2) v.resize(2, 0);
    v[1] = (v[1] + p - 1) % p;
    trim(v);
    return v;
  };
  if (!x_minus(frobenius_power_of_x(f, p, k)).empty()) return false;
  for (auto r : prime_factors(static_cast<std::uint64_t>(k))) {
    Fp g = gcd(x_minus(frobenius_power_of_x(f, p, k / static_cast<int>(r))), f, p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace detail

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field {
 public:
  std::uint32_t p() const { return p_; }
  int k() const { return k_; }
  std::uint32_t q() const { return q_; }
  bool is_prime_field() const { return k_ == 1; }
  /// Monic modulus, little-endian, length k+1.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  Elem zero() const { return {0}; }
  Elem one() const { return {1}; }
  /// The class of T in F_p[T]/(modulus).
  Elem generator() const { return from_coeffs(std::vector<std::uint32_t>{0, 1}); }
  Elem primitive() const { return exp_[1 % exp_.size()]; }

  Elem from_int(std::int64_t c) const {
    std::int64_t r = c % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return {static_cast<std::uint32_t>(r)};
  }

  /// Coefficients beyond degree k-1 are folded back through the modulus.
  Elem from_coeffs(std::span<const std::uint32_t> c) const {
    detail::Fp v(c.begin(), c.end());
    for (auto& x : v) x %= p_;
    if (v.size() > static_cast<std::size_t>(k_)) v = detail::mod(std::move(v), modulus_, p_);
    std::uint32_t idx = 0;
    for (std::size_t i = v.size(); i-- > 0;) idx = idx * p_ + v[i];
    return {idx};
  }

  std::vector<std::uint32_t> coeffs(Elem e) const {
    auto d = detail::digits(e.v, p_, k_);
    return {d.begin(), d.end()};
  }

  Elem add(Elem a, Elem b) const {
    if (p_ == 2) return {a.v ^ b.v};
    if (k_ == 1) return {static_cast<std::uint32_t>((std::uint64_t(a.v) + b.v) % p_)};
    if (a.v == 0) return b;
    if (b.v == 0) return a;
    const std::uint32_t la = log_[a.v], lb = log_[b.v];
    const std::uint32_t d = lb >= la ? lb - la : lb + (q_ - 1) - la;
    const std::uint32_t z = zech_[d];
    if (z == kNone) return {0};
    return exp_[(std::uint64_t(la) + z) % (q_ - 1)];
  }

  Elem neg(Elem a) const {
    if (p_ == 2 || a.v == 0) return a;
    if (k_ == 1) return {p_ - a.v};
    return exp_[(std::uint64_t(log_[a.v]) + (q_ - 1) / 2) % (q_ - 1)];
  }

  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const {
    if (a.v == 0 || b.v == 0) return {0};
    if (k_ == 1) return {static_cast<std::uint32_t>(std::uint64_t(a.v) * b.v % p_)};
    return exp_[(std::uint64_t(log_[a.v]) + log_[b.v]) % (q_ - 1)];
  }

  Elem inv(Elem a) const {
    if (a.v == 0) throw error("inverse of zero in F_" + std::to_string(q_));
    const std::uint32_t l = log_[a.v];
    return exp_[l == 0 ? 0 : (q_ - 1) - l];
  }

  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  Elem pow(Elem a, std::uint64_t e) const {
    if (e == 0) return one();
    if (a.v == 0) return zero();
    return exp_[(std::uint64_t(log_[a.v]) * (e % (q_ - 1))) % (q_ - 1)];
  }

  /// x^(p^times)
  Elem frobenius(Elem x, unsigned times) const {
    if (x.v == 0) return x;
    std::uint64_t e = 1 % (q_ - 1), b = p_ % (q_ - 1);
    for (unsigned i = 0; i < times; ++i) e = e * b % (q_ - 1);
    return exp_[(std::uint64_t(log_[x.v]) * e) % (q_ - 1)];
  }

  /// Discrete log with respect to primitive(); undefined for zero.
  std::uint32_t log(Elem a) const { return log_[a.v]; }

  std::string to_string(Elem e) const {
    if (k_ == 1) return std::to_string(e.v);
    std::string s = "[";
    auto c = coeffs(e);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(c[i]);
    }
    return s + "]";
  }

  /// "p" or "p^k"
  std::string spec() const {
    return k_ == 1 ? std::to_string(p_) : std::to_string(p_) + "^" + std::to_string(k_);
  }

  bool same_as(const Field& o) const { return p_ == o.p_ && k_ == o.k_; }

 private:
  friend FieldPtr field_create(std::uint32_t p, int k);
  static constexpr std::uint32_t kNone = 0xffffffffu;

  Field(std::uint32_t p, int k, std::vector<std::uint32_t> modulus)
      : p_(p), k_(k), modulus_(std::move(modulus)) {
    std::uint64_t q = 1;
    for (int i = 0; i < k; ++i) q *= p;
    q_ = static_cast<std::uint32_t>(q);
    build_tables();
  }

  // Slow multiplication on packed indices, only used while building tables.
  std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b) const {
    if (p_ == 2) {
      std::uint64_t r = 0;
      for (int i = 0; i < k_; ++i)
        if ((b >> i) & 1u) r ^= std::uint64_t(a) << i;
      std::uint64_t m = 0;
      for (std::size_t i = 0; i < modulus_.size(); ++i) m |= std::uint64_t(modulus_[i]) << i;
      for (int i = 2 * k_; i >= k_; --i)
        if ((r >> i) & 1u) r ^= m << (i - k_);
      return static_cast<std::uint32_t>(r);
    }
    auto r = detail::mulmod(detail::digits(a, p_, k_), detail::digits(b, p_, k_), modulus_, p_);
    std::uint32_t idx = 0;
    for (std::size_t i = r.size(); i-- > 0;) idx = idx * p_ + r[i];
    return idx;
  }

  std::uint32_t slow_pow(std::uint32_t a, std::uint64_t e) const {
    std::uint32_t acc = 1;
    while (e) {
      if (e & 1) acc = slow_mul(acc, a);
      a = slow_mul(a, a);
      e >>= 1;
    }
    return acc;
  }

  void build_tables() {
    const std::uint64_t order = q_ - 1;
    exp_.assign(order == 0 ? 1 : order, Elem{1});
    log_.assign(q_, 0);
    if (q_ == 2) return;
    const auto factors = prime_factors(order);
    std::uint32_t g = 0;
    for (std::uint32_t cand = 1; cand < q_; ++cand) {
      bool ok = true;
      for (auto r : factors) {
        if (slow_pow(cand, order / r) == 1) {
          ok = false;
          break;
        }
      }
      if (ok) {
        g = cand;
        break;
      }
    }
    std::uint32_t cur = 1;
    for (std::uint64_t i = 0; i < order; ++i) {
      exp_[i] = Elem{cur};
      log_[cur] = static_cast<std::uint32_t>(i);
      cur = slow_mul(cur, g);
    }
    if (k_ > 1 && p_ != 2) {
      zech_.assign(order, kNone);
      for (std::uint64_t i = 0; i < order; ++i) {
        const std::uint32_t x = exp_[i].v;
        const std::uint32_t one_plus = (x % p_ == p_ - 1) ? x - (p_ - 1) : x + 1;
        if (one_plus != 0) zech_[i] = log_[one_plus];
      }
    }
  }

  std::uint32_t p_;
  int k_;
  std::uint32_t q_ = 0;
  std::vector<std::uint32_t> modulus_;
  std::vector<Elem> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> zech_;
};

/// The field F_{p^k} with the lexicographically smallest monic irreducible
/// modulus (lower coefficients ordered by packed index).  Descriptors are
/// cached, so equal (p, k) always yield the same object.
inline FieldPtr field_create(std::uint32_t p, int k) {
  if (!is_prime(p)) throw error("characteristic " + std::to_string(p) + " is not prime");
  if (p > kMaxCharacteristic) throw limit_error("characteristic exceeds 2^16");
  if (k < 1) throw error("extension degree must be >= 1");
  std::uint64_t q = 1;
  for (int i = 0; i < k; ++i) {
    q *= p;
    if (q > kMaxFieldSize) throw limit_error("field size " + std::to_string(p) + "^" + std::to_string(k) + " exceeds 2^20");
  }

  static std::mutex mutex;
  static std::map<std::pair<std::uint32_t, int>, FieldPtr> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find({p, k}); it != cache.end()) return it->second;

  std::vector<std::uint32_t> modulus;
  const std::uint64_t lower = q;
  for (std::uint64_t idx = 0; idx < lower; ++idx) {
    auto f = detail::digits(idx, p, k);
    f.push_back(1);
    if (k == 1 || (k <= 4 ? detail::irreducible_exhaustive(f, p) : detail::irreducible_rabin(f, p))) {
      modulus.assign(f.begin(), f.end());
      break;
    }
  }
  if (modulus.empty()) throw error("no irreducible modulus found");  // unreachable
  FieldPtr field(new Field(p, k, std::move(modulus)));
  cache.emplace(std::make_pair(p, k), field);
  return field;
}

/// Parses "p" or "p^k".
inline FieldPtr parse_field(std::string_view spec) {
  auto parse_uint = [&](std::string_view s, std::size_t offset) {
    if (s.empty()) throw parse_error("expected digits in field spec", offset);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw parse_error("unexpected character in field spec", offset + i);
      v = v * 10 + static_cast<std::uint64_t>(s[i] - '0');
      if (v > (1ull << 32)) throw limit_error("field spec number too large");
    }
    return v;
  };
  const auto caret = spec.find('^');
  const auto p = parse_uint(spec.substr(0, caret), 0);
  std::uint64_t k = 1;
  if (caret != std::string_view::npos) k = parse_uint(spec.substr(caret + 1), caret + 1);
  if (k == 0 || k > 64) throw error("extension degree out of range in field spec");
  if (p > kMaxCharacteristic) {
    if (!is_prime(p)) throw error("characteristic " + std::to_string(p) + " is not prime");
    throw limit_error("characteristic exceeds 2^16");
  }
  return field_create(static_cast<std::uint32_t>(p), static_cast<int>(k));
}

/// Reads one coefficient starting at pos: decimal digits (reduced mod p) or
/// a bracketed little-endian coefficient vector "[c0,c1,...]".  Whitespace
/// is skipped before and inside brackets; pos is left after the token.
inline Elem parse_element(std::string_view text, std::size_t& pos, const Field& field) {
  auto skip = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' || text[pos] == '\r'))
      ++pos;
  };
  auto digits_mod_p = [&]() -> std::uint32_t {
    skip();
    if (pos >= text.size() || text[pos] < '0' || text[pos] > '9') throw parse_error("expected digits", pos);
    std::uint64_t v = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      v = (v * 10 + static_cast<std::uint64_t>(text[pos] - '0')) % field.p();
      ++pos;
    }
    return static_cast<std::uint32_t>(v);
  };
  skip();
  if (pos < text.size() && text[pos] == '[') {
    ++pos;
    std::vector<std::uint32_t> c{digits_mod_p()};
    skip();
    while (pos < text.size() && text[pos] == ',') {
      ++pos;
      c.push_back(digits_mod_p());
      skip();
    }
    if (pos >= text.size() || text[pos] != ']') throw parse_error("expected ']'", pos);
    ++pos;
    return field.from_coeffs(c);
  }
  return Elem{digits_mod_p()};
}

/// All q elements in packed-index order (coefficient vectors compared from
/// the highest-degree coefficient down).
inline std::vector<Elem> enumerate_field(const Field& f) {
  std::vector<Elem> out(f.q());
  for (std::uint32_t i = 0; i < f.q(); ++i) out[i] = Elem{i};
  return out;
}

inline std::size_t frobenius_orbit_size(const Field& f, Elem x, unsigned step = 1) {
  Elem y = f.frobenius(x, step);
  std::size_t n = 1;
  while (y != x) {
    y = f.frobenius(y, step);
    ++n;
  }
  return n;
}

/// A field homomorphism source -> target determined by where the source
/// generator goes.
class Embedding {
 public:
  const FieldPtr& source() const { return source_; }
  const FieldPtr& target() const { return target_; }
  Elem image_of_generator() const { return image_of_generator_; }
  Elem operator()(Elem x) const { return table_[x.v]; }

  /// The source element mapping to y, if y lies in the image.
  std::optional<Elem> preimage(Elem y) const {
    auto it = std::lower_bound(inverse_.begin(), inverse_.end(), std::make_pair(y.v, 0u));
    if (it == inverse_.end() || it->first != y.v) return std::nullopt;
    return Elem{it->second};
  }

 private:
  friend Embedding embed_build(const FieldPtr&, const FieldPtr&);
  FieldPtr source_, target_;
  Elem image_of_generator_;
  std::vector<Elem> table_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> inverse_;
};

/// Embeds source into target by the first root (in enumeration order) of
/// the source modulus inside target.  Results are cached.
inline Embedding embed_build(const FieldPtr& source, const FieldPtr& target) {
  if (source->p() != target->p()) throw error("embedding between fields of different characteristic");
  if (target->k() % source->k() != 0)
    throw error("F_" + std::to_string(source->q()) + " does not embed in F_" + std::to_string(target->q()));

  static std::mutex mutex;
  static std::map<std::tuple<std::uint32_t, int, int>, Embedding> cache;
  const auto key = std::make_tuple(source->p(), source->k(), target->k());
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }

  const Field& t = *target;
  const auto& m = source->modulus();
  std::vector<Elem> lifted(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) lifted[i] = t.from_int(m[i]);
  auto eval = [&](Elem x) {
    Elem acc = t.zero();
    for (std::size_t i = lifted.size(); i-- > 0;) acc = t.add(t.mul(acc, x), lifted[i]);
    return acc;
  };
  bool found = false;
  Elem root{};
  for (std::uint32_t i = 0; i < t.q(); ++i) {
    if (eval(Elem{i}) == t.zero()) {
      root = Elem{i};
      found = true;
      break;
    }
  }
  if (!found) throw error("source modulus has no root in target; modulus is broken");

  Embedding e;
  e.source_ = source;
  e.target_ = target;
  e.image_of_generator_ = root;
  e.table_.resize(source->q());
  std::vector<Elem> powers(static_cast<std::size_t>(source->k()));
  Elem pw = t.one();
  for (auto& x : powers) {
    x = pw;
    pw = t.mul(pw, root);
  }
  for (std::uint32_t idx = 0; idx < source->q(); ++idx) {
    auto c = source->coeffs(Elem{idx});
    Elem acc = t.zero();
    for (std::size_t i = 0; i < c.size(); ++i) acc = t.add(acc, t.mul(t.from_int(c[i]), powers[i]));
    e.table_[idx] = acc;
    e.inverse_.emplace_back(acc.v, idx);
  }
  std::sort(e.inverse_.begin(), e.inverse_.end());
  std::lock_guard lock(mutex);
  cache.emplace(key, e);
  return e;
}

/// F_{q^m} for q = base.q().
inline FieldPtr extension(const Field& base, int m) { return field_create(base.p(), base.k() * m); }

}  // namespace gf
}  // namespace hypmult

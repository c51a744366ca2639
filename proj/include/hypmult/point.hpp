#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gf.hpp"

namespace hypmult {

using gf::Elem;
using gf::Field;
using gf::FieldPtr;

/// A point of P^n over `field`, scaled so its leftmost nonzero coordinate
/// is 1.
struct ProjPoint {
  FieldPtr field;
  std::vector<Elem> coords;

  int n() const { return static_cast<int>(coords.size()) - 1; }

  static ProjPoint make(FieldPtr field, std::vector<Elem> coords) {
    ProjPoint p{std::move(field), std::move(coords)};
    p.normalize();
    return p;
  }

  void normalize() {
    std::size_t lead = 0;
    while (lead < coords.size() && coords[lead].v == 0) ++lead;
    if (lead == coords.size()) throw error("projective point with all coordinates zero");
    const Elem inv = field->inv(coords[lead]);
    for (std::size_t i = lead; i < coords.size(); ++i) coords[i] = field->mul(coords[i], inv);
  }

  int first_nonzero() const {
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (coords[i].v != 0) return static_cast<int>(i);
    return -1;
  }

  /// Coordinate-wise x -> x^(p^times).
  ProjPoint frobenius(unsigned times) const {
    ProjPoint r = *this;
    for (auto& c : r.coords) c = field->frobenius(c, times);
    return r;
  }

  /// Image in a larger field.
  ProjPoint lift(const FieldPtr& target) const {
    auto phi = gf::embed_build(field, target);
    ProjPoint r{target, coords};
    for (auto& c : r.coords) c = phi(c);
    return r;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (i) s += ':';
      s += field->to_string(coords[i]);
    }
    return s;
  }

  friend bool operator==(const ProjPoint& a, const ProjPoint& b) {
    return a.field->same_as(*b.field) && a.coords == b.coords;
  }
  friend bool operator<(const ProjPoint& a, const ProjPoint& b) { return a.coords < b.coords; }
};

/// Parses "a0:a1:...:an".  A leading '-' negates a coordinate.
inline ProjPoint parse_point(std::string_view text, const FieldPtr& field) {
  std::vector<Elem> coords;
  std::size_t pos = 0;
  for (;;) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    bool negate = false;
    if (pos < text.size() && text[pos] == '-') {
      negate = true;
      ++pos;
    }
    Elem c = gf::parse_element(text, pos, *field);
    coords.push_back(negate ? field->neg(c) : c);
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos == text.size()) break;
    if (text[pos] != ':') throw parse_error("expected ':' in point", pos);
    ++pos;
  }
  if (coords.size() < 2) throw parse_error("point needs at least two coordinates", 0);
  return ProjPoint::make(field, std::move(coords));
}

}  // namespace hypmult

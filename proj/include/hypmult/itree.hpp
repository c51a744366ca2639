#pragma once

// Intersection trees: labeled, edge-weighted trees of subscheme
// occurrences, their weights, structural validation, the multiplicity
// inequalities they carry, and automatic construction for plane curves.

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "plane.hpp"

namespace hypmult {

enum class SchemeKind { closed_point, registered };

struct SchemeDescriptor {
  SchemeKind kind = SchemeKind::registered;
  std::string name;
  std::optional<ClosedPoint> point;  // closed-point kind
  std::vector<MPoly> equations;      // optional for registered kind; enables containment tests
  int dim = 0;
  std::uint64_t deg = 1;
  std::map<std::string, int> mu;     // recorded multiplicities mu_Z(X_i), keyed by family member

  static SchemeDescriptor closed(ClosedPoint C, std::string name = {}) {
    SchemeDescriptor d;
    d.kind = SchemeKind::closed_point;
    d.name = name.empty() ? C.representative().to_string() : std::move(name);
    d.deg = C.degree();
    d.dim = 0;
    d.point = std::move(C);
    return d;
  }
  static SchemeDescriptor registered(std::string name, int dim, std::uint64_t deg, std::vector<MPoly> equations = {}) {
    SchemeDescriptor d;
    d.name = std::move(name);
    d.dim = dim;
    d.deg = deg;
    d.equations = std::move(equations);
    return d;
  }

  /// Scheme identity: orbit equality for closed points, names otherwise.
  bool same_scheme(const SchemeDescriptor& o) const {
    if (kind != o.kind) return false;
    if (kind == SchemeKind::closed_point) return *point == *o.point;
    return name == o.name;
  }

  /// Whether a closed point lies on this scheme; nullopt when undecidable
  /// (registered handle without equations).
  std::optional<bool> contains(const ClosedPoint& C) const {
    if (kind == SchemeKind::closed_point) return *point == C;
    if (equations.empty()) return std::nullopt;
    for (auto& g : equations)
      if (eval_proj(g, over_common_field(C.representative(), g.field())).v != 0) return false;
    return true;
  }
};

struct TreeLabel {
  std::string name;
  std::vector<MPoly> equations;
  int degree = 1;
};

struct TreeVertex {
  SchemeDescriptor scheme;
  std::optional<TreeLabel> label;
  std::uint64_t edge_weight = 1;  // weight of the edge from the parent
  std::vector<TreeVertex> children;

  bool is_leaf() const { return children.empty(); }
};

struct IntersectionTree {
  TreeVertex root;
  std::optional<std::uint64_t> root_weight;
};

struct FamilyMember {
  std::string name;
  std::uint64_t degree = 1;
  std::optional<MPoly> equation;
};

struct Forest {
  int level = 1;
  int n = 2;
  FieldPtr field;
  std::vector<FamilyMember> family;
  std::vector<IntersectionTree> trees;
};

using VertexPath = std::vector<std::size_t>;

/// Product of edge weights from the root along `path` (child indices).
inline std::uint64_t vertex_weight(const IntersectionTree& tree, const VertexPath& path) {
  const TreeVertex* v = &tree.root;
  std::uint64_t w = 1;
  for (auto i : path) {
    if (i >= v->children.size()) throw error("vertex path leaves the tree");
    v = &v->children[i];
    w = checked_mul(w, v->edge_weight);
  }
  return w;
}

namespace itree_detail {

template <class Visit>
void walk(const TreeVertex& v, std::uint64_t weight, VertexPath& path, Visit&& visit) {
  visit(v, weight, path);
  for (std::size_t i = 0; i < v.children.size(); ++i) {
    path.push_back(i);
    walk(v.children[i], checked_mul(weight, v.children[i].edge_weight), path, visit);
    path.pop_back();
  }
}

template <class Visit>
void walk(const IntersectionTree& t, Visit&& visit) {
  VertexPath path;
  walk(t.root, 1, path, visit);
}

}  // namespace itree_detail

/// Sum of vertex weights over every occurrence of Z in the tree.
inline std::uint64_t scheme_weight(const IntersectionTree& tree, const SchemeDescriptor& Z) {
  std::uint64_t total = 0;
  itree_detail::walk(tree, [&](const TreeVertex& v, std::uint64_t w, const VertexPath&) {
    if (v.scheme.same_scheme(Z)) total = checked_add(total, w);
  });
  return total;
}

inline std::uint64_t scheme_weight(const Forest& forest, const SchemeDescriptor& Z) {
  std::uint64_t total = 0;
  for (auto& t : forest.trees) total = checked_add(total, scheme_weight(t, Z));
  return total;
}

/// sum over trees of root_weight * W_T(M)
inline std::uint64_t aggregate_lhs(const Forest& forest, const SchemeDescriptor& M) {
  std::uint64_t total = 0;
  for (auto& t : forest.trees) {
    if (!t.root_weight) throw error("tree rooted at " + t.root.scheme.name + " has no root weight");
    total = checked_add(total, checked_mul(*t.root_weight, scheme_weight(t, M)));
  }
  return total;
}

struct InequalityVerdict {
  bool applicable = true;
  bool ok = false;
  std::uint64_t lhs = 0;
  std::uint64_t rhs = 0;
  std::string reason;
};

/// Every vertex whose scheme strictly contains M must have a descendant
/// occurrence of M.  Only decidable for point targets; registered vertices
/// without equations are taken as asserted by the caller.
inline std::optional<std::string> eligibility_violation(const Forest& forest, const SchemeDescriptor& M) {
  if (M.kind != SchemeKind::closed_point) return std::nullopt;
  std::function<bool(const TreeVertex&)> has_occurrence = [&](const TreeVertex& v) {
    if (v.scheme.same_scheme(M)) return true;
    for (auto& c : v.children)
      if (has_occurrence(c)) return true;
    return false;
  };
  std::optional<std::string> bad;
  for (auto& t : forest.trees)
    itree_detail::walk(t, [&](const TreeVertex& v, std::uint64_t, const VertexPath&) {
      if (bad || v.scheme.same_scheme(M)) return;
      auto inside = v.scheme.contains(*M.point);
      if (!inside || !*inside) return;
      bool below = false;
      for (auto& c : v.children) below = below || has_occurrence(c);
      if (!below) bad = "vertex " + v.scheme.name + " contains " + M.name + " but has no descendant occurrence of it";
    });
  return bad;
}

inline InequalityVerdict check_chongshu2(const Forest& forest, const SchemeDescriptor& M, std::uint64_t mu_product) {
  InequalityVerdict v;
  v.rhs = mu_product;
  if (auto why = eligibility_violation(forest, M)) {
    v.applicable = false;
    v.reason = *why;
    return v;
  }
  v.lhs = aggregate_lhs(forest, M);
  v.ok = v.lhs >= v.rhs;
  v.reason = std::to_string(v.lhs) + (v.ok ? " >= " : " < ") + std::to_string(v.rhs);
  return v;
}

/// Structural violations of the level-delta tree rules; empty when valid.
inline std::vector<std::string> validate_tree(const IntersectionTree& tree, int level) {
  std::vector<std::string> out;
  itree_detail::walk(tree, [&](const TreeVertex& v, std::uint64_t, const VertexPath&) {
    const std::string& id = v.scheme.name;
    if (v.is_leaf() && v.label) out.push_back(id + ": leaf with label");
    if (!v.is_leaf() && !v.label) out.push_back(id + ": inner vertex without label");
    if (v.scheme.deg < 1) out.push_back(id + ": degree must be positive");
    if (v.label && v.label->degree > level)
      out.push_back(id + ": label degree " + std::to_string(v.label->degree) + " exceeds level " + std::to_string(level));
    if (v.label && !v.is_leaf()) {
      std::uint64_t sum = 0;
      for (auto& c : v.children) sum += c.edge_weight * c.scheme.deg;
      const std::uint64_t expected = v.scheme.deg * static_cast<std::uint64_t>(v.label->degree);
      if (sum != expected)
        out.push_back(id + ": Bezout sum " + std::to_string(sum) + " != " + std::to_string(expected));
    }
    for (auto& c : v.children) {
      if (c.edge_weight < 1) out.push_back(c.scheme.name + ": edge weight must be positive");
      if (!(c.scheme.dim < v.scheme.dim || (c.scheme.dim == 0 && v.scheme.dim == 0)))
        out.push_back(c.scheme.name + ": dimension does not drop below " + id);
    }
  });
  return out;
}

inline std::vector<std::string> validate_forest(const Forest& forest) {
  std::vector<std::string> out;
  for (auto& t : forest.trees) {
    auto v = validate_tree(t, forest.level);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

/// sum over depth-0 components Z of prod_i mu_Z(X_i) * deg Z <= prod_i deg X_i
inline InequalityVerdict check_globale(const Forest& forest) {
  InequalityVerdict v;
  v.rhs = 1;
  for (auto& m : forest.family) v.rhs = checked_mul(v.rhs, m.degree);
  for (auto& t : forest.trees) {
    std::uint64_t term = t.root.scheme.deg;
    for (auto& m : forest.family) {
      auto it = t.root.scheme.mu.find(m.name);
      if (it == t.root.scheme.mu.end()) {
        v.applicable = false;
        v.reason = t.root.scheme.name + " has no recorded multiplicity for " + m.name;
        return v;
      }
      term = checked_mul(term, static_cast<std::uint64_t>(it->second));
    }
    v.lhs = checked_add(v.lhs, term);
  }
  v.ok = v.lhs <= v.rhs;
  v.reason = std::to_string(v.lhs) + (v.ok ? " <= " : " > ") + std::to_string(v.rhs);
  return v;
}

struct PlaneForest {
  Forest forest;
  CompleteIntersection label;
  std::uint64_t bezout_total = 0;
};

/// Depth-0 forest of a reduced plane curve: the components of X . V(g_1)
/// for the first complete-intersection partner g_1, weighted by their
/// intersection multiplicities.  Smooth curves give an empty forest.
inline PlaneForest build_plane_forest(const HypersurfaceScheme& X) {
  if (X.n != 2) throw error("build_plane_forest needs a plane curve");
  auto verdict = is_reduced(X);
  if (!verdict.reduced) throw error("build_plane_forest needs a reduced curve: " + verdict.reason);
  PlaneForest out;
  out.forest.level = X.delta;
  out.forest.n = 2;
  out.forest.field = X.field();
  out.forest.family = {{"X", static_cast<std::uint64_t>(X.delta), X.f}, {"g1", static_cast<std::uint64_t>(X.delta - 1), std::nullopt}};
  if (verdict.singular.dim < 0) return out;
  out.label = complete_intersection_search(X);
  const MPoly f = X.f.over(out.label.field);
  const MPoly& g = out.label.sequence.front();
  const auto Xf = HypersurfaceScheme::make(f), Xg = HypersurfaceScheme::make(g);
  out.forest.field = out.label.field;
  out.forest.family[0].equation = f;
  out.forest.family[1].equation = g;
  for (auto& C : plane_closed_points({f, g})) {
    IntersectionTree t;
    t.root.scheme = SchemeDescriptor::closed(C);
    t.root.scheme.mu["X"] = multiplicity_at(Xf, C.representative()).mu;
    t.root.scheme.mu["g1"] = multiplicity_at(Xg, C.representative()).mu;
    t.root_weight = plane_intersection_mult(f, g, C.representative());
    out.bezout_total += *t.root_weight * C.degree();
    out.forest.trees.push_back(std::move(t));
  }
  return out;
}

// JSON form: {level, ambient:{n, field}, family:[{name, degree}],
// roots:[{scheme, root_weight, label?, children:[{weight, vertex}]}]}.
// Scheme: {kind, name, deg, dim, point?, point_field?, equations?, mu?}.

namespace itree_detail {

using nlohmann::json;

inline json equations_to_json(const std::vector<MPoly>& eqs) {
  json a = json::array();
  for (auto& g : eqs) a.push_back(g.to_string());
  return a;
}

inline std::vector<MPoly> equations_from_json(const json& j, const FieldPtr& field, int nvars) {
  std::vector<MPoly> out;
  for (auto& s : j) out.push_back(poly_parse(s.get<std::string>(), field, nvars));
  return out;
}

inline json scheme_to_json(const SchemeDescriptor& s) {
  json j;
  j["kind"] = s.kind == SchemeKind::closed_point ? "closed-point" : "registered";
  j["name"] = s.name;
  j["deg"] = s.deg;
  j["dim"] = s.dim;
  if (s.point) {
    j["point"] = s.point->representative().to_string();
    j["point_field"] = s.point->representative().field->spec();
  }
  if (!s.equations.empty()) j["equations"] = equations_to_json(s.equations);
  if (!s.mu.empty()) j["mu"] = s.mu;
  return j;
}

inline SchemeDescriptor scheme_from_json(const json& j, const FieldPtr& field, int n) {
  SchemeDescriptor s;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "closed-point") {
    auto pf = j.contains("point_field") ? gf::parse_field(j["point_field"].get<std::string>()) : field;
    auto P = parse_point(j.at("point").get<std::string>(), pf);
    if (static_cast<int>(P.coords.size()) != n + 1) throw error("point " + P.to_string() + " has the wrong arity");
    s = SchemeDescriptor::closed(frobenius_orbit(P, field), j.value("name", std::string{}));
    if (j.contains("deg") && j["deg"].get<std::uint64_t>() != s.deg)
      throw error("closed point " + s.name + " has degree " + std::to_string(s.deg) + ", file says " +
                  std::to_string(j["deg"].get<std::uint64_t>()));
  } else if (kind == "registered") {
    s = SchemeDescriptor::registered(j.at("name").get<std::string>(), j.at("dim").get<int>(),
                                     j.at("deg").get<std::uint64_t>());
  } else {
    throw error("unknown scheme kind '" + kind + "'");
  }
  if (j.contains("equations")) s.equations = equations_from_json(j["equations"], field, n + 1);
  if (j.contains("mu")) s.mu = j["mu"].get<std::map<std::string, int>>();
  return s;
}

inline json vertex_to_json(const TreeVertex& v) {
  json j;
  j["scheme"] = scheme_to_json(v.scheme);
  if (v.label) {
    j["label"] = {{"name", v.label->name}, {"degree", v.label->degree}};
    if (!v.label->equations.empty()) j["label"]["equations"] = equations_to_json(v.label->equations);
  }
  j["children"] = json::array();
  for (auto& c : v.children) j["children"].push_back({{"weight", c.edge_weight}, {"vertex", vertex_to_json(c)}});
  return j;
}

inline TreeVertex vertex_from_json(const json& j, const FieldPtr& field, int n) {
  TreeVertex v;
  v.scheme = scheme_from_json(j.at("scheme"), field, n);
  if (j.contains("label")) {
    const auto& l = j["label"];
    TreeLabel label;
    label.name = l.value("name", std::string{});
    label.degree = l.at("degree").get<int>();
    if (l.contains("equations")) label.equations = equations_from_json(l["equations"], field, n + 1);
    v.label = std::move(label);
  }
  if (j.contains("children"))
    for (auto& c : j["children"]) {
      TreeVertex child = vertex_from_json(c.at("vertex"), field, n);
      child.edge_weight = c.at("weight").get<std::uint64_t>();
      v.children.push_back(std::move(child));
    }
  return v;
}

}  // namespace itree_detail

inline nlohmann::json forest_to_json(const Forest& f) {
  using nlohmann::json;
  json j;
  j["level"] = f.level;
  j["ambient"] = {{"n", f.n}, {"field", f.field->spec()}};
  j["family"] = json::array();
  for (auto& m : f.family) {
    json member = {{"name", m.name}, {"degree", m.degree}};
    if (m.equation) member["equation"] = m.equation->to_string();
    j["family"].push_back(std::move(member));
  }
  j["roots"] = json::array();
  for (auto& t : f.trees) {
    json r = itree_detail::vertex_to_json(t.root);
    if (t.root_weight) r["root_weight"] = *t.root_weight;
    j["roots"].push_back(std::move(r));
  }
  return j;
}

inline Forest forest_from_json(const nlohmann::json& j) {
  try {
    Forest f;
    f.level = j.at("level").get<int>();
    f.n = j.at("ambient").at("n").get<int>();
    f.field = gf::parse_field(j.at("ambient").at("field").get<std::string>());
    if (j.contains("family"))
      for (auto& m : j["family"]) {
        FamilyMember member{m.at("name").get<std::string>(), m.at("degree").get<std::uint64_t>(), std::nullopt};
        if (m.contains("equation")) member.equation = poly_parse(m["equation"].get<std::string>(), f.field, f.n + 1);
        f.family.push_back(std::move(member));
      }
    for (auto& r : j.at("roots")) {
      IntersectionTree t;
      t.root = itree_detail::vertex_from_json(r, f.field, f.n);
      if (r.contains("root_weight")) t.root_weight = r["root_weight"].get<std::uint64_t>();
      f.trees.push_back(std::move(t));
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw error(std::string("malformed tree file: ") + e.what());
  }
}

inline Forest load_forest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw error(path + ": " + e.what());
  }
  return forest_from_json(j);
}

/// Looks a scheme up by name anywhere in the forest.
inline std::optional<SchemeDescriptor> find_scheme(const Forest& forest, const std::string& name) {
  std::optional<SchemeDescriptor> out;
  for (auto& t : forest.trees)
    itree_detail::walk(t, [&](const TreeVertex& v, std::uint64_t, const VertexPath&) {
      if (!out && v.scheme.name == name) out = v.scheme;
    });
  return out;
}

}  // namespace hypmult

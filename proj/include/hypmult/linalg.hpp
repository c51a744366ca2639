#pragma once

// Dense Gaussian elimination over a finite field.

#include <vector>

#include "gf.hpp"

namespace hypmult::linalg {

using gf::Elem;
using gf::Field;
using Row = std::vector<Elem>;
using Matrix = std::vector<Row>;

/// Reduced row echelon form in place; returns pivot columns in order.
/// Zero rows are dropped.
inline std::vector<std::size_t> rref(const Field& F, Matrix& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t cols = m.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && m[piv][c].v == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[r], m[piv]);
    const Elem inv = F.inv(m[r][c]);
    for (auto& x : m[r]) x = F.mul(x, inv);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c].v == 0) continue;
      const Elem f = m[i][c];
      for (std::size_t j = c; j < cols; ++j)
        if (m[r][j].v != 0) m[i][j] = F.sub(m[i][j], F.mul(f, m[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  return pivots;
}

inline std::size_t rank(const Field& F, Matrix m) { return rref(F, m).size(); }

/// Basis of {x : m x = 0}; one vector per free column, in column order.
inline Matrix kernel(const Field& F, Matrix m, std::size_t cols) {
  const auto pivots = rref(F, m);
  std::vector<int> pivot_row(cols, -1);
  for (std::size_t i = 0; i < pivots.size(); ++i) pivot_row[pivots[i]] = static_cast<int>(i);
  Matrix basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (pivot_row[free] >= 0) continue;
    Row v(cols, F.zero());
    v[free] = F.one();
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = F.neg(m[i][free]);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace hypmult::linalg

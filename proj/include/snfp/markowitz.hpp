#pragma once

#include <cstdint>
#include <optional>

#include "snfp/sparse.hpp"

namespace snfp {

/// A pivot candidate with its Markowitz count (r_i - 1)(c_j - 1), where
/// r_i and c_j count the nonzeros of the whole current row and column.
struct Pivot {
  Index row = 0;
  Index col = 0;
  std::uint64_t count = 0;

  friend bool operator==(const Pivot&, const Pivot&) = default;
};

/// True when p beats q: smaller count, then smaller (row, col).
inline bool better_pivot(const Pivot& p, const Pivot& q) noexcept {
  if (p.count != q.count) return p.count < q.count;
  if (p.row != q.row) return p.row < q.row;
  return p.col < q.col;
}

/// Serial reference: visits every nonzero with row >= c and col >= c.
std::optional<Pivot> markowitz_pivot_reference(const SparseMatrix& a, Index c);

/// Same answer as the reference. Skips whole columns whose count lower
/// bound (c_j - 1)(r_min - 1) already exceeds the best count found, and with
/// threads > 1 splits the column range across OpenMP threads.
std::optional<Pivot> markowitz_pivot(const SparseMatrix& a, Index c, int threads = 1);

/// Whether the library was built with OpenMP.
bool parallel_kernels_available() noexcept;

}  // namespace snfp

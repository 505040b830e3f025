#include "snfp/markowitz.hpp"

#include <algorithm>
#include <limits>

#ifdef SNFP_HAVE_OPENMP
#include <omp.h>
#endif

namespace snfp {

bool parallel_kernels_available() noexcept {
#ifdef SNFP_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

std::optional<Pivot> markowitz_pivot_reference(const SparseMatrix& a, Index c) {
  const FieldSpec& f = a.field();
  std::optional<Pivot> best;
  for (Index j = c; j < a.cols(); ++j) {
    const auto& col = a.col(j);
    const std::uint64_t cj = col.nnz();
    for (std::size_t t = col.lower_bound(c, f); t < col.nnz(); ++t) {
      const Index i = index_of(col.elems()[t], f);
      Pivot cand{i, j, (a.row_count(i) - 1) * (cj - 1)};
      if (!best || better_pivot(cand, *best)) best = cand;
    }
  }
  return best;
}

namespace {

constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();

struct RowFloor {
  std::uint64_t rmin = kNone;     // least nonzero row count among rows >= c
  Index first_singleton = kNone;  // least row >= c with exactly one entry
};

// Scans columns [lo, hi) into `best`, pruning with the row-count floor.
// Once a zero count is known, a column with two or more entries can only
// supply another zero through a singleton row, so it is skipped when the
// first singleton row cannot beat the current best on the tie-break.
void scan_columns(const SparseMatrix& a, Index c, Index lo, Index hi, const RowFloor& floor,
                  Pivot& best) {
  const FieldSpec& f = a.field();
  const unsigned k = f.k();
  const auto& rc = a.row_counts();
  for (Index j = lo; j < hi; ++j) {
    const auto& e = a.col(j).elems();
    if (e.empty()) continue;
    const std::uint64_t cj1 = e.size() - 1;
    if (cj1 * (floor.rmin - 1) > best.count) continue;
    if (best.count == 0 && cj1 > 0 && floor.first_singleton >= best.row) continue;
    // Active columns hold no rows below c once pivots 0..c-1 are done, but
    // the kernel does not rely on it.
    std::size_t t = (index_of(e.front(), f) >= c) ? 0 : a.col(j).lower_bound(c, f);
    for (; t < e.size(); ++t) {
      const Index i = e[t].packed >> k;
      const std::uint64_t count = (rc[i] - 1) * cj1;
      if (count < best.count || (count == best.count && (i < best.row || (i == best.row && j < best.col))))
        best = Pivot{i, j, count};
    }
  }
}

}  // namespace

std::optional<Pivot> markowitz_pivot(const SparseMatrix& a, Index c, int threads) {
  const auto& rc = a.row_counts();
  RowFloor floor;
  for (Index i = c; i < a.rows(); ++i) {
    if (rc[i] != 0 && rc[i] < floor.rmin) floor.rmin = rc[i];
    if (rc[i] == 1 && floor.first_singleton == kNone) floor.first_singleton = i;
  }
  if (floor.rmin == kNone) return std::nullopt;

  Pivot best{kNone, kNone, kNone};
  const Index n = a.cols();
#ifdef SNFP_HAVE_OPENMP
  if (threads > 1 && n - c > 1024) {
#pragma omp parallel num_threads(threads)
    {
      Pivot local{kNone, kNone, kNone};
      const Index chunk = 256;
#pragma omp for schedule(dynamic, 1) nowait
      for (std::int64_t lo = static_cast<std::int64_t>(c); lo < static_cast<std::int64_t>(n);
           lo += chunk) {
        scan_columns(a, c, static_cast<Index>(lo), std::min<Index>(n, static_cast<Index>(lo) + chunk),
                     floor, local);
      }
#pragma omp critical(snfp_markowitz_reduce)
      {
        if (local.count != kNone && better_pivot(local, best)) best = local;
      }
    }
  } else {
    scan_columns(a, c, c, n, floor, best);
  }
#else
  (void)threads;
  scan_columns(a, c, c, n, floor, best);
#endif
  if (best.count == kNone) return std::nullopt;
  return best;
}

}  // namespace snfp

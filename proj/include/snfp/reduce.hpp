#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <optional>
#include <vector>

#include "snfp/markowitz.hpp"
#include "snfp/sparse.hpp"
#include "snfp/transcript.hpp"

namespace snfp {

inline constexpr std::size_t kTauInfinity = std::numeric_limits<std::size_t>::max();

/// Directory for spill files: $SNFP_SPILL_DIR if set, else the system
/// temporary directory.
std::filesystem::path default_spill_dir();

struct SnfOptions {
  bool emit_p = false;
  bool emit_q = false;
  /// Switch to disk HNF once the active region holds at least this many
  /// nonzeros. Runs at most once.
  std::size_t tau = kTauInfinity;
  /// Scale each pivot to 1, recording row dilations in P.
  bool normalize_pivots = false;
  std::optional<std::filesystem::path> fill_log_path;
  /// Transcript destinations; required when the matching emit flag is set.
  std::filesystem::path p_path;
  std::filesystem::path q_path;
  std::filesystem::path spill_dir = default_spill_dir();
  /// Threads for the pivot search. 1 keeps the run strictly sequential.
  int threads = 1;
  /// Use the brute-force pivot scan (benchmarks and cross-checks).
  bool reference_pivot = false;
};

struct DiskHnfStats {
  bool ran = false;
  Index pivot_index = 0;          // c at which it ran
  std::size_t spilled_nnz = 0;    // nonzeros written to disk
  Index echelon_columns = 0;      // rank of the active region
  Index peak_echelon_columns = 0;
  std::size_t peak_echelon_nnz = 0;
  std::size_t final_echelon_nnz = 0;
};

struct SnfResult {
  Index rank = 0;
  /// Nonzero diagonal entries of D in pivot order.
  std::vector<FieldValue> diag;
  std::optional<Transcript> p;
  std::optional<Transcript> q;
  /// Active-region nonzeros at each pivot index, ending with 0.
  std::vector<std::size_t> fill_log;
  std::size_t peak_active = 0;
  DiskHnfStats disk_hnf;
};

/// Smith normal form A = P D Q over F_p. Overwrites `a` with D.
///
/// Each step takes the active-region nonzero of least Markowitz count (ties
/// to the smallest (row, col)), moves it to (c, c) with one row and one
/// column swap, clears row c with column transvections, then column c with
/// row transvections. Because the row is cleared first, the pivot row holds a
/// single entry when the column is cleared and each row transvection only
/// deletes one entry.
SnfResult snf(SparseMatrix& a, const SnfOptions& opts = {});

/// One-shot out-of-core column echelon form of the active region at corner
/// c (columns >= c; those columns must have no entries above row c).
///
/// The active columns are written to a spill file and freed, then read back
/// one at a time. Each incoming column is reduced against the echelon set at
/// its pivot rows; a nonzero remainder joins the set with pivot row = its
/// smallest index and that row is cleared from the other echelon columns.
/// On return, columns c, c+1, ... hold the echelon columns in ascending pivot
/// row order followed by zero columns. Column operations go to `q` when it
/// is non-null. The spill file is removed on success and kept on failure.
DiskHnfStats disk_hnf(SparseMatrix& a, Index c, TranscriptWriter* q,
                      const std::filesystem::path& spill_dir = default_spill_dir());

/// Writes one count per line.
void write_fill_log(const std::filesystem::path& path, const std::vector<std::size_t>& log);

}  // namespace snfp

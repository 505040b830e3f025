#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "snfp/reduce.hpp"
#include "snfp/sparse.hpp"
#include "snfp/transcript.hpp"

namespace snfp {

/// Two consecutive differentials of a cochain complex
///   C^6 <--d_top-- C^5 <--d_bottom-- C^4
/// with d_top (n6 x n5) * d_bottom (n5 x n4) = 0.
struct ComplexSlice {
  SparseMatrix d_top;
  SparseMatrix d_bottom;
  /// Set for complexes of the arithmetic application, which need a
  /// characteristic other than 2, 3, 5.
  bool arithmetic = false;
};

/// Work above this many multiply-adds switches the d_top * d_bottom == 0
/// check from exact to randomized.
inline constexpr std::size_t kExactComplexCheckLimit = 50'000'000;

/// Shape, field and composition checks. Throws Shape, Domain or NotAComplex
/// errors.
void validate_slice(const ComplexSlice& slice, std::size_t exact_limit = kExactComplexCheckLimit);

/// eta = Q5 * d_bottom with its first rho5 rows (which must vanish) removed.
/// Q5 is applied through the transpose of d_bottom. Throws NotAComplex when
/// a nonzero turns up in the removed rows.
SparseMatrix build_eta(const Transcript& q5, const SparseMatrix& d_bottom, Index rho5);

struct CohomologyOptions {
  std::filesystem::path workdir;
  /// Disk HNF threshold for the eta reduction. d_top is always reduced by
  /// Markowitz alone since its Q is needed.
  std::size_t tau = kTauInfinity;
  int threads = 1;
  std::filesystem::path spill_dir = default_spill_dir();
  std::size_t exact_check_limit = kExactComplexCheckLimit;
  /// Also write the active-region logs of both reductions to the workdir.
  bool fill_logs = false;
};

/// H^5 of a slice. Everything except the in-memory basis copy also lives in
/// the work directory:
///   d5.sms d4.sms   inputs
///   q5.trn          column transcript of the d_top reduction
///   peta.trn        row transcript of the eta reduction
///   basis.sms       n5 x h5, column j is the cocycle z_j
///   meta.txt        p, n4, n5, n6, rho5, rho_eta, h5, h6
struct CohomologyWorkspace {
  std::filesystem::path workdir;
  FieldSpec field;
  Index n4 = 0, n5 = 0, n6 = 0;
  Index rho5 = 0;
  Index rho_eta = 0;
  Index h5 = 0;
  Index h6 = 0;
  Transcript q5;
  Transcript p_eta;
  SparseMatrix basis;
  std::size_t peak_active_top = 0;
  std::size_t peak_active_eta = 0;
};

CohomologyWorkspace compute_h5(const ComplexSlice& slice, const CohomologyOptions& opts);

/// Reopens a work directory written by compute_h5.
CohomologyWorkspace load_workspace(const std::filesystem::path& workdir);

/// Coordinates s (length h5) with y - sum_j s_j z_j in the image of d_bottom.
/// Throws NotACocycle unless the first rho5 entries of Q5 y vanish, which
/// holds exactly when d_top y = 0.
std::vector<FieldValue> reduce_cocycle(const CohomologyWorkspace& ws, std::vector<FieldValue> y);

/// Column-wise reduce_cocycle of an n5 x k matrix, returned as h5 x k.
SparseMatrix reduce_cocycles(const CohomologyWorkspace& ws, const SparseMatrix& y);

/// The h5 x h5 matrix of an operator given the images of z_1..z_h5 as the
/// columns of `translates` (n5 x h5).
SparseMatrix hecke_matrix(const CohomologyWorkspace& ws, const SparseMatrix& translates);

}  // namespace snfp

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <span>
#include <vector>

#include "snfp/elementary.hpp"
#include "snfp/sparse.hpp"

namespace snfp {

// A transcript stores a change-of-basis matrix as the ordered list of
// elementary matrices it is a product of, one text record per line:
//
//   ROW 15218 12379      header: side, dimension, characteristic
//   S 0 4                swap lines 0 and 4
//   T 0 7 12001          add 12001 x line 0 to line 7
//   D 3 5                multiply line 3 by 5
//
// Each record is the elementary matrix E_l itself, described by what it does
// on its side: for ROW, E_l * X performs the op on rows of X; for COL,
// X * E_l performs it on columns of X. Records are in generation order
// E_0, E_1, ..., and the represented matrix is
//   ROW: P = E_0 E_1 E_2 ...
//   COL: Q = ... E_2 E_1 E_0

enum class Side { Row, Col };

/// Which product to form with the represented matrix M.
enum class ApplyMode {
  Left,          // M * X
  LeftInverse,   // M^-1 * X
  Right,         // X * M
  RightInverse,  // X * M^-1
};

ElementaryOp parse_record(const std::string& line, Index dim, const FieldSpec& f);

class TranscriptWriter {
public:
  TranscriptWriter(const std::filesystem::path& path, Side side, Index dim, FieldSpec field);
  TranscriptWriter(const TranscriptWriter&) = delete;
  TranscriptWriter& operator=(const TranscriptWriter&) = delete;
  TranscriptWriter(TranscriptWriter&&) = default;

  void append(const ElementaryOp& op);
  /// Flushes and closes the file. Throws an Io error on write failure.
  void finish();

  Side side() const noexcept { return side_; }
  Index dim() const noexcept { return dim_; }
  std::uint64_t size() const noexcept { return count_; }
  const std::filesystem::path& path() const noexcept { return path_; }

private:
  std::filesystem::path path_;
  std::ofstream out_;
  Side side_;
  Index dim_;
  FieldSpec field_;
  std::uint64_t count_ = 0;
};

/// Read-only view of a finalized transcript file. Opening builds a byte
/// offset per record in one forward pass so records can also be visited in
/// reverse. Every traversal opens its own cursor, so concurrent traversals
/// of one Transcript are safe.
class Transcript {
public:
  explicit Transcript(std::filesystem::path path);

  /// Writes `ops` to `path` and opens the result.
  static Transcript create(const std::filesystem::path& path, Side side, Index dim,
                           FieldSpec field, std::span<const ElementaryOp> ops);

  Side side() const noexcept { return side_; }
  Index dim() const noexcept { return dim_; }
  const FieldSpec& field() const noexcept { return field_; }
  std::uint64_t size() const noexcept { return offsets_.size(); }
  const std::filesystem::path& path() const noexcept { return path_; }

  ElementaryOp record(std::uint64_t l) const;
  void for_each_forward(const std::function<void(const ElementaryOp&)>& fn) const;
  void for_each_reverse(const std::function<void(const ElementaryOp&)>& fn) const;

  /// Calls fn with the line operation to perform, in order, so that
  /// applying them to X yields the product selected by `mode`. For the Left
  /// modes the ops act on rows of X; for the Right modes on columns.
  void for_each_action(ApplyMode mode,
                       const std::function<void(const ElementaryOp&)>& fn) const;

private:
  std::vector<ElementaryOp> read_range(std::uint64_t lo, std::uint64_t hi) const;

  std::filesystem::path path_;
  Side side_ = Side::Row;
  Index dim_ = 0;
  FieldSpec field_;
  std::vector<std::uint64_t> offsets_;
  std::uint64_t end_offset_ = 0;
};

/// X <- product selected by mode. Left modes need X.rows() == dim, right
/// modes X.cols() == dim; otherwise a Shape error. Row operations on X go
/// through one transpose.
void apply(const Transcript& t, SparseMatrix& x, ApplyMode mode);

/// Dense vector form. Left modes treat x as a column vector (M x), right
/// modes as a row vector (x^T M).
void apply(const Transcript& t, std::vector<FieldValue>& x, ApplyMode mode);

inline constexpr Index kMaterializeLimit = 4096;

/// The explicit dim x dim matrix. Refuses (Domain error) above `limit`.
SparseMatrix materialize(const Transcript& t, Index limit = kMaterializeLimit);

}  // namespace snfp

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "snfp/elementary.hpp"
#include "snfp/gfp.hpp"

namespace snfp {

/// Sorted sequence of packed elements: indices strictly increasing, values
/// nonzero.
class SparseVector {
public:
  SparseVector() = default;
  explicit SparseVector(std::vector<SparseElement> elems) : elems_(std::move(elems)) {}

  /// Builds from (index, value) pairs in any order; zero values are dropped.
  /// Throws a Domain error on a repeated index.
  static SparseVector from_pairs(std::vector<std::pair<Index, FieldValue>> pairs,
                                 const FieldSpec& f);

  std::size_t nnz() const noexcept { return elems_.size(); }
  bool empty() const noexcept { return elems_.empty(); }

  const std::vector<SparseElement>& elems() const noexcept { return elems_; }
  std::vector<SparseElement>& elems() noexcept { return elems_; }

  auto begin() const noexcept { return elems_.begin(); }
  auto end() const noexcept { return elems_.end(); }

  /// Value stored at `index`, or 0.
  FieldValue at(Index index, const FieldSpec& f) const noexcept;
  /// Position of the first element with index >= `index`.
  std::size_t lower_bound(Index index, const FieldSpec& f) const noexcept;

  /// True when indices strictly increase and no stored value is zero.
  bool well_formed(const FieldSpec& f) const noexcept;

  void clear() noexcept { elems_.clear(); }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

private:
  std::vector<SparseElement> elems_;
};

/// dst + s * src in one merge pass; entries that cancel are removed.
SparseVector axpy(const SparseVector& dst, const SparseVector& src, FieldValue s,
                  const FieldSpec& f);

/// Column-major sparse matrix over F_p with maintained per-row and
/// per-column nonzero counts.
class SparseMatrix {
public:
  SparseMatrix(Index rows, Index cols, FieldSpec field);

  /// Convenience for tests and small inputs; zero entries are skipped.
  static SparseMatrix from_dense(const std::vector<std::vector<FieldValue>>& rows,
                                 FieldSpec field);
  static SparseMatrix identity(Index n, FieldSpec field);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  const FieldSpec& field() const noexcept { return field_; }
  std::size_t nnz() const noexcept { return nnz_; }

  const SparseVector& col(Index j) const { return cols_data_[j]; }
  std::span<const SparseVector> columns() const noexcept { return cols_data_; }

  Index row_count(Index i) const { return row_counts_[i]; }
  Index col_count(Index j) const { return cols_data_[j].nnz(); }
  const std::vector<Index>& row_counts() const noexcept { return row_counts_; }

  FieldValue at(Index i, Index j) const;
  /// Sets one entry (v == 0 erases). O(column length).
  void set(Index i, Index j, FieldValue v);

  /// Replaces column j. The vector must be well formed with indices < rows().
  void set_column(Index j, SparseVector v);
  /// Removes and returns column j, leaving it empty.
  SparseVector take_column(Index j);

  // Elementary column operations.
  void swap_cols(Index a, Index b);
  /// column b += v * column a
  void add_col_multiple(Index a, Index b, FieldValue v);
  void scale_col(Index a, FieldValue u);

  // Elementary row operations. Each sweeps columns [first_col, cols()).
  // Callers that know columns below first_col do not touch the rows
  // involved may narrow the sweep.
  void swap_rows(Index a, Index b, Index first_col = 0);
  /// row b += v * row a
  void add_row_multiple(Index a, Index b, FieldValue v, Index first_col = 0);
  void scale_row(Index a, FieldValue u, Index first_col = 0);

  /// Removes every entry of column j with row index > i and returns them,
  /// keeping counts consistent.
  std::vector<SparseElement> cut_column_below(Index j, Index i);

  /// Recomputes counts from scratch and compares with the maintained ones.
  bool counts_consistent() const;

  /// Dense copy; intended for tests and small matrices.
  std::vector<std::vector<FieldValue>> to_dense() const;

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.field_ == b.field_ &&
           a.cols_data_ == b.cols_data_;
  }

private:
  friend SparseMatrix transpose(const SparseMatrix& a);

  void check_row(Index i) const;
  void check_col(Index j) const;
  void check_unit(FieldValue u) const;

  Index rows_;
  Index cols_;
  FieldSpec field_;
  std::vector<SparseVector> cols_data_;
  std::vector<Index> row_counts_;
  std::size_t nnz_ = 0;
  std::vector<SparseElement> scratch_;
};

/// Exact transpose in time linear in rows + cols + nnz.
SparseMatrix transpose(const SparseMatrix& a);

/// Applies an elementary operation to the columns / rows of A in place.
void elem_col_op(SparseMatrix& a, const ElementaryOp& op);
void elem_row_op(SparseMatrix& a, const ElementaryOp& op);

/// Applies many row operations in order: one transpose, column operations on
/// the transpose, transpose back.
void apply_row_ops(SparseMatrix& a, std::span<const ElementaryOp> ops);

/// Number of nonzeros with row >= c and column >= c.
std::size_t nnz_active(const SparseMatrix& a, Index c);

}  // namespace snfp

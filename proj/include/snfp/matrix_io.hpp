#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "snfp/sparse.hpp"

namespace snfp {

// Matrix text format:
//   m n p            header: shape and field characteristic
//   i j v            one line per nonzero, 1-based, v in [1, p), any order
//   0 0 0            terminator
// Duplicate (i, j) entries are rejected.

struct MatrixEntry {
  Index row;  // 0-based
  Index col;  // 0-based
  FieldValue value;
};

/// Streams the entries of a matrix text file one line at a time. Errors
/// carry "<source>:<line>:" prefixes.
class MatrixTextReader {
public:
  MatrixTextReader(std::istream& in, std::string source);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  const FieldSpec& field() const noexcept { return field_; }

  /// Next entry, or nullopt after the terminator line.
  std::optional<MatrixEntry> next();

private:
  [[noreturn]] void fail(const std::string& what) const;
  bool next_line(std::string& line);

  std::istream& in_;
  std::string source_;
  std::size_t line_no_ = 0;
  Index rows_ = 0;
  Index cols_ = 0;
  FieldSpec field_;
  bool done_ = false;
};

SparseMatrix read_matrix(std::istream& in, const std::string& source = "<stream>");
SparseMatrix read_matrix_file(const std::filesystem::path& path);

/// Writes entries column by column, rows ascending within a column.
void write_matrix(std::ostream& out, const SparseMatrix& a);
void write_matrix_file(const std::filesystem::path& path, const SparseMatrix& a);

}  // namespace snfp

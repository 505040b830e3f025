#pragma once

#include <cstdint>
#include <string>

#include "snfp/gfp.hpp"

namespace snfp {

/// One elementary operation on the lines (rows or columns) of a matrix.
///   Swap(a, b)            exchange lines a and b
///   Transvection(a, b, v) add v times line a to line b
///   Dilation(a, u)        multiply line a by the unit u
struct ElementaryOp {
  enum class Kind : std::uint8_t { Swap, Transvection, Dilation };

  Kind kind = Kind::Swap;
  Index a = 0;
  Index b = 0;
  FieldValue v = 0;

  static ElementaryOp swap(Index a, Index b) { return {Kind::Swap, a, b, 0}; }
  static ElementaryOp transvection(Index a, Index b, FieldValue v) {
    return {Kind::Transvection, a, b, v};
  }
  static ElementaryOp dilation(Index a, FieldValue u) { return {Kind::Dilation, a, 0, u}; }

  /// The operation that undoes this one.
  ElementaryOp inverse(const FieldSpec& f) const;

  /// Throws a Domain error when indices reach `dim`, a == b for a two-line
  /// op, or the scalar is zero / out of range.
  void validate(Index dim, const FieldSpec& f) const;

  friend bool operator==(const ElementaryOp&, const ElementaryOp&) = default;
};

std::string to_string(const ElementaryOp& op);

}  // namespace snfp

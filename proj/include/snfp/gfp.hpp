#pragma once

#include <cstdint>
#include <utility>

#include "snfp/error.hpp"

namespace snfp {

using FieldValue = std::uint32_t;
using Index = std::uint64_t;

inline constexpr FieldValue kDefaultPrime = 12379;

/// An odd prime p < 2^15 together with its value bit width k (smallest k
/// with p < 2^k). Immutable after construction.
class FieldSpec {
public:
  explicit FieldSpec(FieldValue p = kDefaultPrime);

  FieldValue p() const noexcept { return p_; }
  unsigned k() const noexcept { return k_; }
  std::uint64_t value_mask() const noexcept { return (std::uint64_t{1} << k_) - 1; }

  /// Largest row index that still packs into 64 bits.
  Index max_index() const noexcept { return (~std::uint64_t{0}) >> k_; }

  FieldValue add(FieldValue a, FieldValue b) const noexcept {
    FieldValue s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  FieldValue sub(FieldValue a, FieldValue b) const noexcept {
    return a >= b ? a - b : a + p_ - b;
  }
  FieldValue neg(FieldValue a) const noexcept { return a == 0 ? 0 : p_ - a; }
  FieldValue mul(FieldValue a, FieldValue b) const noexcept {
    return static_cast<FieldValue>((std::uint32_t{a} * b) % p_);
  }
  /// Throws a Domain error for a == 0.
  FieldValue inv(FieldValue a) const;

  /// Canonical representative of an arbitrary integer.
  FieldValue reduce(std::int64_t x) const noexcept {
    std::int64_t r = x % static_cast<std::int64_t>(p_);
    return static_cast<FieldValue>(r < 0 ? r + p_ : r);
  }

  bool operator==(const FieldSpec& o) const noexcept { return p_ == o.p_; }

private:
  FieldValue p_;
  unsigned k_;
};

bool is_prime(std::uint64_t n) noexcept;

/// A (row index, value) pair packed into one 64-bit word as i * 2^k + v.
/// Ordering of packed words agrees with ordering of row indices.
struct SparseElement {
  std::uint64_t packed = 0;

  friend bool operator==(SparseElement a, SparseElement b) noexcept = default;
};

/// Throws an Encoding (Domain) error if v >= p or i does not fit in 64 - k bits.
SparseElement pack(Index i, FieldValue v, const FieldSpec& spec);

inline Index index_of(SparseElement e, const FieldSpec& spec) noexcept {
  return e.packed >> spec.k();
}
inline FieldValue value_of(SparseElement e, const FieldSpec& spec) noexcept {
  return static_cast<FieldValue>(e.packed & spec.value_mask());
}
inline std::pair<Index, FieldValue> unpack(SparseElement e, const FieldSpec& spec) noexcept {
  return {index_of(e, spec), value_of(e, spec)};
}

// Narrow-word layout (M - i - 1) * 2^k + v, where M bounds the row count.
// Small near the end of an elimination when i approaches M. Kept for
// reading data produced by 32-bit builds; nothing in the pipeline uses it.
namespace legacy {
std::uint64_t pack_reversed(Index i, FieldValue v, Index row_bound, const FieldSpec& spec);
std::pair<Index, FieldValue> unpack_reversed(std::uint64_t word, Index row_bound,
                                             const FieldSpec& spec);
}  // namespace legacy

}  // namespace snfp

#include "snfp/gfp.hpp"

#include <string>

namespace snfp {

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

FieldSpec::FieldSpec(FieldValue p) : p_(p), k_(0) {
  if (p >= (1u << 15)) throw domain_error("field characteristic " + std::to_string(p) + " is not below 2^15");
  if (p == 2 || !is_prime(p)) throw domain_error("field characteristic " + std::to_string(p) + " is not an odd prime");
  while ((FieldValue{1} << k_) <= p) ++k_;
}

FieldValue FieldSpec::inv(FieldValue a) const {
  if (a == 0 || a >= p_) throw domain_error("inverse of zero in F_" + std::to_string(p_));
  std::int64_t r0 = p_, r1 = a, t0 = 0, t1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    std::int64_t t2 = t0 - q * t1;
    t0 = t1;
    t1 = t2;
  }
  return reduce(t0);
}

SparseElement pack(Index i, FieldValue v, const FieldSpec& spec) {
  if (v >= spec.p()) throw domain_error("value " + std::to_string(v) + " out of range for F_" + std::to_string(spec.p()));
  if (i > spec.max_index()) throw domain_error("row index " + std::to_string(i) + " overflows the packed word");
  return SparseElement{(i << spec.k()) | v};
}

namespace legacy {

std::uint64_t pack_reversed(Index i, FieldValue v, Index row_bound, const FieldSpec& spec) {
  if (i >= row_bound) throw domain_error("row index outside the declared bound");
  return pack(row_bound - i - 1, v, spec).packed;
}

std::pair<Index, FieldValue> unpack_reversed(std::uint64_t word, Index row_bound,
                                             const FieldSpec& spec) {
  auto [r, v] = unpack(SparseElement{word}, spec);
  return {row_bound - r - 1, v};
}

}  // namespace legacy
}  // namespace snfp

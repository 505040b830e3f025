#include "snfp/elementary.hpp"

namespace snfp {

ElementaryOp ElementaryOp::inverse(const FieldSpec& f) const {
  switch (kind) {
    case Kind::Swap:
      return *this;
    case Kind::Transvection:
      return transvection(a, b, f.neg(v));
    case Kind::Dilation:
      return dilation(a, f.inv(v));
  }
  throw internal_error("unknown elementary op kind");
}

void ElementaryOp::validate(Index dim, const FieldSpec& f) const {
  if (a >= dim) throw domain_error("elementary op index " + std::to_string(a) + " out of range");
  if (kind == Kind::Dilation) {
    if (v == 0 || v >= f.p()) throw domain_error("dilation scalar must be a unit");
    return;
  }
  if (b >= dim) throw domain_error("elementary op index " + std::to_string(b) + " out of range");
  if (a == b) throw domain_error("elementary op needs two distinct lines");
  if (kind == Kind::Transvection && (v == 0 || v >= f.p()))
    throw domain_error("transvection scalar must be nonzero");
}

std::string to_string(const ElementaryOp& op) {
  switch (op.kind) {
    case ElementaryOp::Kind::Swap:
      return "S " + std::to_string(op.a) + " " + std::to_string(op.b);
    case ElementaryOp::Kind::Transvection:
      return "T " + std::to_string(op.a) + " " + std::to_string(op.b) + " " + std::to_string(op.v);
    case ElementaryOp::Kind::Dilation:
      return "D " + std::to_string(op.a) + " " + std::to_string(op.v);
  }
  return "?";
}

}  // namespace snfp

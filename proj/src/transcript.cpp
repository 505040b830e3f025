#include "snfp/transcript.hpp"

#include <charconv>
#include <string>

namespace snfp {

namespace {

const char* side_name(Side s) { return s == Side::Row ? "ROW" : "COL"; }

bool read_uint(const char*& p, const char* end, std::uint64_t& out) {
  while (p != end && *p == ' ') ++p;
  auto [next, ec] = std::from_chars(p, end, out);
  if (ec != std::errc() || next == p) return false;
  p = next;
  return true;
}

// A left mode on a ROW transcript or a right mode on a COL transcript
// performs each record's own line op; the other two pairings perform the
// transposed op.
bool native(Side side, ApplyMode mode) {
  const bool left = mode == ApplyMode::Left || mode == ApplyMode::LeftInverse;
  return left == (side == Side::Row);
}

bool inverted(ApplyMode mode) {
  return mode == ApplyMode::LeftInverse || mode == ApplyMode::RightInverse;
}

// Row side: P = E0 E1 ... ; P X peels from the right, X P from the left.
// Column side: Q = ... E1 E0 ; the mirror image.
bool forward_order(Side side, ApplyMode mode) {
  const bool row = side == Side::Row;
  switch (mode) {
    case ApplyMode::Left:
      return !row;
    case ApplyMode::LeftInverse:
      return row;
    case ApplyMode::Right:
      return row;
    case ApplyMode::RightInverse:
      return !row;
  }
  return true;
}

}  // namespace

ElementaryOp parse_record(const std::string& line, Index dim, const FieldSpec& f) {
  const char* p = line.data();
  const char* end = p + line.size();
  if (end != p && end[-1] == '\r') --end;
  if (p == end) throw parse_error("empty transcript record");
  const char tag = *p++;
  std::uint64_t x[3] = {0, 0, 0};
  int want = tag == 'T' ? 3 : 2;
  if (tag != 'S' && tag != 'T' && tag != 'D') throw parse_error("unknown transcript record \"" + line + "\"");
  for (int t = 0; t < want; ++t)
    if (!read_uint(p, end, x[t])) throw parse_error("malformed transcript record \"" + line + "\"");
  if (p != end) throw parse_error("trailing data in transcript record \"" + line + "\"");
  ElementaryOp op;
  if (tag == 'S') op = ElementaryOp::swap(x[0], x[1]);
  else if (tag == 'T') {
    if (x[2] >= f.p()) throw parse_error("transcript scalar out of range in \"" + line + "\"");
    op = ElementaryOp::transvection(x[0], x[1], static_cast<FieldValue>(x[2]));
  } else {
    if (x[1] >= f.p()) throw parse_error("transcript scalar out of range in \"" + line + "\"");
    op = ElementaryOp::dilation(x[0], static_cast<FieldValue>(x[1]));
  }
  try {
    op.validate(dim, f);
  } catch (const Error& e) {
    throw parse_error(std::string("invalid transcript record: ") + e.what());
  }
  return op;
}

TranscriptWriter::TranscriptWriter(const std::filesystem::path& path, Side side, Index dim,
                                   FieldSpec field)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), side_(side), dim_(dim), field_(field) {
  if (!out_) throw io_error("cannot create transcript " + path.string());
  out_ << side_name(side) << ' ' << dim << ' ' << field.p() << '\n';
}

void TranscriptWriter::append(const ElementaryOp& op) {
  op.validate(dim_, field_);
  out_ << to_string(op) << '\n';
  if (!out_) throw io_error("write failed for transcript " + path_.string());
  ++count_;
}

void TranscriptWriter::finish() {
  if (!out_.is_open()) return;
  out_.flush();
  if (!out_) throw io_error("write failed for transcript " + path_.string());
  out_.close();
}

Transcript::Transcript(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw io_error("cannot open transcript " + path_.string());
  std::string header;
  if (!std::getline(in, header)) throw parse_error(path_.string() + ": missing transcript header");
  {
    const char* p = header.data();
    const char* end = p + header.size();
    if (end != p && end[-1] == '\r') --end;
    std::string tag(p, std::min<std::size_t>(3, header.size()));
    if (tag == "ROW") side_ = Side::Row;
    else if (tag == "COL") side_ = Side::Col;
    else throw parse_error(path_.string() + ":1: transcript header must start with ROW or COL");
    p += 3;
    std::uint64_t dim = 0, prime = 0;
    if (!read_uint(p, end, dim) || !read_uint(p, end, prime) || p != end)
      throw parse_error(path_.string() + ":1: malformed transcript header");
    if (prime >= (1u << 15) || prime == 2 || !is_prime(prime))
      throw parse_error(path_.string() + ":1: bad characteristic in transcript header");
    dim_ = dim;
    field_ = FieldSpec(static_cast<FieldValue>(prime));
  }

  std::uint64_t pos = header.size() + 1;
  std::uint64_t line_start = pos;
  std::vector<char> buf(1 << 20);
  bool at_line_start = true;
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const std::streamsize got = in.gcount();
    for (std::streamsize t = 0; t < got; ++t, ++pos) {
      if (at_line_start) {
        line_start = pos;
        at_line_start = false;
      }
      if (buf[t] == '\n') {
        if (pos > line_start) offsets_.push_back(line_start);
        at_line_start = true;
      }
    }
  }
  if (!at_line_start) throw parse_error(path_.string() + ": truncated final transcript record");
  end_offset_ = pos;
}

Transcript Transcript::create(const std::filesystem::path& path, Side side, Index dim,
                              FieldSpec field, std::span<const ElementaryOp> ops) {
  TranscriptWriter w(path, side, dim, field);
  for (const auto& op : ops) w.append(op);
  w.finish();
  return Transcript(path);
}

std::vector<ElementaryOp> Transcript::read_range(std::uint64_t lo, std::uint64_t hi) const {
  std::vector<ElementaryOp> ops;
  if (lo >= hi) return ops;
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw io_error("cannot open transcript " + path_.string());
  const std::uint64_t start = offsets_[lo];
  const std::uint64_t stop = hi < offsets_.size() ? offsets_[hi] : end_offset_;
  std::string bytes(stop - start, '\0');
  in.seekg(static_cast<std::streamoff>(start));
  in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::uint64_t>(in.gcount()) != bytes.size())
    throw io_error("short read from transcript " + path_.string());
  ops.reserve(hi - lo);
  std::size_t p = 0;
  for (std::uint64_t l = lo; l < hi; ++l) {
    std::size_t q = bytes.find('\n', p);
    try {
      ops.push_back(parse_record(bytes.substr(p, q - p), dim_, field_));
    } catch (const Error& e) {
      throw parse_error(path_.string() + ": record " + std::to_string(l) + ": " + e.what());
    }
    p = q + 1;
  }
  return ops;
}

ElementaryOp Transcript::record(std::uint64_t l) const {
  if (l >= size()) throw domain_error("transcript record index out of range");
  return read_range(l, l + 1).front();
}

namespace {
constexpr std::uint64_t kBatch = 1 << 16;
}

void Transcript::for_each_forward(const std::function<void(const ElementaryOp&)>& fn) const {
  for (std::uint64_t lo = 0; lo < size(); lo += kBatch)
    for (const auto& op : read_range(lo, std::min(size(), lo + kBatch))) fn(op);
}

void Transcript::for_each_reverse(const std::function<void(const ElementaryOp&)>& fn) const {
  for (std::uint64_t hi = size(); hi > 0;) {
    const std::uint64_t lo = hi > kBatch ? hi - kBatch : 0;
    auto ops = read_range(lo, hi);
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) fn(*it);
    hi = lo;
  }
}

void Transcript::for_each_action(ApplyMode mode,
                                 const std::function<void(const ElementaryOp&)>& fn) const {
  const bool nat = native(side_, mode);
  const bool inv = inverted(mode);
  auto visit = [&](const ElementaryOp& rec) {
    ElementaryOp op = inv ? rec.inverse(field_) : rec;
    if (!nat && op.kind == ElementaryOp::Kind::Transvection) std::swap(op.a, op.b);
    fn(op);
  };
  if (forward_order(side_, mode)) for_each_forward(visit);
  else for_each_reverse(visit);
}

void apply(const Transcript& t, SparseMatrix& x, ApplyMode mode) {
  if (!(x.field() == t.field())) throw shape_error("transcript and matrix use different fields");
  const bool left = mode == ApplyMode::Left || mode == ApplyMode::LeftInverse;
  const Index need = left ? x.rows() : x.cols();
  if (need != t.dim())
    throw shape_error("transcript dimension " + std::to_string(t.dim()) + " does not match operand " +
                      (left ? "row" : "column") + " count " + std::to_string(need));
  if (left) {
    // Row ops on X are column ops on X^T.
    SparseMatrix xt = transpose(x);
    t.for_each_action(mode, [&](const ElementaryOp& op) { elem_col_op(xt, op); });
    x = transpose(xt);
  } else {
    t.for_each_action(mode, [&](const ElementaryOp& op) { elem_col_op(x, op); });
  }
}

void apply(const Transcript& t, std::vector<FieldValue>& x, ApplyMode mode) {
  if (x.size() != t.dim())
    throw shape_error("transcript dimension " + std::to_string(t.dim()) +
                      " does not match vector length " + std::to_string(x.size()));
  const FieldSpec& f = t.field();
  for (auto v : x)
    if (v >= f.p()) throw domain_error("vector entry out of range");
  // Entries of a column vector are its rows, entries of a row vector its
  // columns; either way the line op acts on entries.
  t.for_each_action(mode, [&](const ElementaryOp& op) {
    switch (op.kind) {
      case ElementaryOp::Kind::Swap:
        std::swap(x[op.a], x[op.b]);
        break;
      case ElementaryOp::Kind::Transvection:
        x[op.b] = f.add(x[op.b], f.mul(op.v, x[op.a]));
        break;
      case ElementaryOp::Kind::Dilation:
        x[op.a] = f.mul(x[op.a], op.v);
        break;
    }
  });
}

SparseMatrix materialize(const Transcript& t, Index limit) {
  if (t.dim() > limit)
    throw domain_error("refusing to materialize a " + std::to_string(t.dim()) + "-dimensional transcript (limit " +
                       std::to_string(limit) + ")");
  SparseMatrix m = SparseMatrix::identity(t.dim(), t.field());
  apply(t, m, ApplyMode::Right);
  return m;
}

}  // namespace snfp

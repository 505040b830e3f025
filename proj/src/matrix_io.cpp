#include "snfp/matrix_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace snfp {

namespace {

// Parses exactly `count` unsigned decimal fields separated by blanks.
bool parse_fields(const std::string& line, std::uint64_t* out, int count) {
  const char* p = line.data();
  const char* end = p + line.size();
  for (int t = 0; t < count; ++t) {
    while (p != end && (*p == ' ' || *p == '\t')) ++p;
    auto [next, ec] = std::from_chars(p, end, out[t]);
    if (ec != std::errc() || next == p) return false;
    p = next;
  }
  while (p != end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
  return p == end;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](char ch) { return ch == ' ' || ch == '\t' || ch == '\r'; });
}

}  // namespace

MatrixTextReader::MatrixTextReader(std::istream& in, std::string source)
    : in_(in), source_(std::move(source)) {
  std::string line;
  if (!next_line(line)) fail("missing header line \"m n p\"");
  std::uint64_t h[3];
  if (!parse_fields(line, h, 3)) fail("malformed header, expected \"m n p\"");
  if (h[2] >= (1u << 15) || h[2] == 2 || !is_prime(h[2]))
    fail("characteristic " + std::to_string(h[2]) + " is not an odd prime below 2^15");
  field_ = FieldSpec(static_cast<FieldValue>(h[2]));
  rows_ = h[0];
  cols_ = h[1];
  if (rows_ > 0 && rows_ - 1 > field_.max_index()) fail("row count too large");
}

void MatrixTextReader::fail(const std::string& what) const {
  throw parse_error(source_ + ":" + std::to_string(line_no_) + ": " + what);
}

bool MatrixTextReader::next_line(std::string& line) {
  while (std::getline(in_, line)) {
    ++line_no_;
    if (!blank(line)) return true;
  }
  return false;
}

std::optional<MatrixEntry> MatrixTextReader::next() {
  if (done_) return std::nullopt;
  std::string line;
  if (!next_line(line)) {
    ++line_no_;
    fail("unexpected end of input, missing terminator \"0 0 0\"");
  }
  std::uint64_t f[3];
  if (!parse_fields(line, f, 3)) fail("malformed entry, expected \"i j v\"");
  if (f[0] == 0 && f[1] == 0 && f[2] == 0) {
    done_ = true;
    if (next_line(line)) fail("content after terminator");
    return std::nullopt;
  }
  if (f[0] < 1 || f[0] > rows_) fail("row index " + std::to_string(f[0]) + " out of range");
  if (f[1] < 1 || f[1] > cols_) fail("column index " + std::to_string(f[1]) + " out of range");
  if (f[2] < 1 || f[2] >= field_.p()) fail("value " + std::to_string(f[2]) + " not in [1, p)");
  return MatrixEntry{f[0] - 1, f[1] - 1, static_cast<FieldValue>(f[2])};
}

SparseMatrix read_matrix(std::istream& in, const std::string& source) {
  MatrixTextReader reader(in, source);
  const FieldSpec& f = reader.field();
  std::vector<std::vector<SparseElement>> cols(reader.cols());
  while (auto e = reader.next()) cols[e->col].push_back(pack(e->row, e->value, f));

  SparseMatrix a(reader.rows(), reader.cols(), f);
  for (Index j = 0; j < reader.cols(); ++j) {
    auto& c = cols[j];
    std::sort(c.begin(), c.end(), [](SparseElement x, SparseElement y) { return x.packed < y.packed; });
    for (std::size_t t = 1; t < c.size(); ++t)
      if (index_of(c[t], f) == index_of(c[t - 1], f))
        throw parse_error(source + ": duplicate entry at (" + std::to_string(index_of(c[t], f) + 1) +
                          ", " + std::to_string(j + 1) + ")");
    a.set_column(j, SparseVector(std::move(c)));
  }
  return a;
}

SparseMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());
  return read_matrix(in, path.string());
}

void write_matrix(std::ostream& out, const SparseMatrix& a) {
  const FieldSpec& f = a.field();
  out << a.rows() << ' ' << a.cols() << ' ' << f.p() << '\n';
  for (Index j = 0; j < a.cols(); ++j)
    for (auto e : a.col(j)) out << index_of(e, f) + 1 << ' ' << j + 1 << ' ' << value_of(e, f) << '\n';
  out << "0 0 0\n";
}

void write_matrix_file(const std::filesystem::path& path, const SparseMatrix& a) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path.string());
  write_matrix(out, a);
  if (!out.flush()) throw io_error("write failed for " + path.string());
}

}  // namespace snfp

#include <algorithm>
#include <atomic>
#include <fstream>
#include <numeric>
#include <string>
#include <unistd.h>

#include "snfp/matrix_io.hpp"
#include "snfp/reduce.hpp"

namespace snfp {

namespace {

std::filesystem::path unique_spill_path(const std::filesystem::path& dir) {
  static std::atomic<unsigned> counter{0};
  return dir / ("snfp-spill-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".sms");
}

struct EchelonColumn {
  Index col;        // column of A it lives in until the final placement
  Index pivot_row;
  FieldValue pivot_inv;
  SparseVector vec;
};

constexpr Index kNoOwner = ~Index{0};

}  // namespace

DiskHnfStats disk_hnf(SparseMatrix& a, Index c, TranscriptWriter* q,
                      const std::filesystem::path& spill_dir) {
  const FieldSpec& f = a.field();
  const Index m = a.rows();
  const Index n = a.cols();
  DiskHnfStats stats;
  stats.ran = true;
  stats.pivot_index = c;

  const auto spill = unique_spill_path(spill_dir);
  {
    std::ofstream out(spill);
    if (!out) throw io_error("cannot create spill file " + spill.string());
    out << (m - c) << ' ' << (n - c) << ' ' << f.p() << '\n';
    for (Index j = c; j < n; ++j) {
      SparseVector col = a.take_column(j);
      for (auto e : col) {
        const Index i = index_of(e, f);
        if (i < c) throw internal_error("disk HNF: active column has an entry above the corner");
        out << (i - c + 1) << ' ' << (j - c + 1) << ' ' << value_of(e, f) << '\n';
      }
      stats.spilled_nnz += col.nnz();
    }
    out << "0 0 0\n";
    if (!out.flush()) throw io_error("write failed for spill file " + spill.string());
  }

  std::vector<EchelonColumn> echelon;
  std::vector<Index> owner(m, kNoOwner);
  std::size_t echelon_nnz = 0;

  auto absorb = [&](Index j, SparseVector x) {
    // Zero x at every pivot row it meets. Echelon columns carry no other
    // pivot rows, so the eliminations do not disturb each other.
    std::vector<std::pair<Index, FieldValue>> hits;
    for (auto e : x)
      if (owner[index_of(e, f)] != kNoOwner) hits.emplace_back(index_of(e, f), value_of(e, f));
    for (auto [r, v] : hits) {
      const auto& ec = echelon[owner[r]];
      const FieldValue mult = f.mul(v, ec.pivot_inv);
      x = axpy(x, ec.vec, f.neg(mult), f);
      if (q) q->append(ElementaryOp::transvection(ec.col, j, mult));
    }
    if (x.empty()) return;

    const Index p = index_of(x.elems().front(), f);
    const FieldValue xp = value_of(x.elems().front(), f);
    const FieldValue xp_inv = f.inv(xp);
    for (auto& ec : echelon) {
      const FieldValue v = ec.vec.at(p, f);
      if (v == 0) continue;
      const FieldValue mult = f.mul(v, xp_inv);
      echelon_nnz -= ec.vec.nnz();
      ec.vec = axpy(ec.vec, x, f.neg(mult), f);
      echelon_nnz += ec.vec.nnz();
      if (q) q->append(ElementaryOp::transvection(j, ec.col, mult));
    }
    owner[p] = echelon.size();
    echelon_nnz += x.nnz();
    echelon.push_back(EchelonColumn{j, p, xp_inv, std::move(x)});
    stats.peak_echelon_columns = std::max<Index>(stats.peak_echelon_columns, echelon.size());
    stats.peak_echelon_nnz = std::max(stats.peak_echelon_nnz, echelon_nnz);
  };

  {
    std::ifstream in(spill);
    if (!in) throw io_error("cannot reopen spill file " + spill.string());
    MatrixTextReader reader(in, spill.string());
    if (reader.rows() != m - c || reader.cols() != n - c || !(reader.field() == f))
      throw io_error("spill file " + spill.string() + " has an unexpected header");
    Index current = 0;
    std::vector<SparseElement> buf;
    bool have = false;
    while (auto e = reader.next()) {
      if (have && e->col != current) {
        if (e->col < current) throw io_error("spill file " + spill.string() + " is not column ordered");
        absorb(c + current, SparseVector(std::move(buf)));
        buf = {};
      }
      current = e->col;
      have = true;
      buf.push_back(pack(e->row + c, e->value, f));
    }
    if (have) absorb(c + current, SparseVector(std::move(buf)));
  }

  // Final placement: echelon columns by ascending pivot row, then zero
  // columns in their original order, realized as recorded swaps.
  std::vector<std::size_t> by_pivot(echelon.size());
  std::iota(by_pivot.begin(), by_pivot.end(), 0);
  std::sort(by_pivot.begin(), by_pivot.end(),
            [&](std::size_t x, std::size_t y) { return echelon[x].pivot_row < echelon[y].pivot_row; });

  const Index width = n - c;
  std::vector<char> is_echelon(width, 0);
  for (const auto& ec : echelon) is_echelon[ec.col - c] = 1;
  std::vector<Index> order;  // order[k] = original column placed at c + k
  order.reserve(width);
  for (auto t : by_pivot) order.push_back(echelon[t].col);
  for (Index j = c; j < n; ++j)
    if (!is_echelon[j - c]) order.push_back(j);

  std::vector<Index> where(width), occupant(width);
  std::iota(where.begin(), where.end(), c);
  std::iota(occupant.begin(), occupant.end(), c);
  for (Index k = 0; k < width; ++k) {
    const Index pos = c + k;
    const Index id = order[k];
    const Index cur = where[id - c];
    if (cur == pos) continue;
    if (q) q->append(ElementaryOp::swap(pos, cur));
    const Index displaced = occupant[pos - c];
    occupant[cur - c] = displaced;
    where[displaced - c] = cur;
    occupant[pos - c] = id;
    where[id - c] = pos;
  }

  for (Index k = 0; k < by_pivot.size(); ++k) {
    stats.final_echelon_nnz += echelon[by_pivot[k]].vec.nnz();
    a.set_column(c + k, std::move(echelon[by_pivot[k]].vec));
  }
  stats.echelon_columns = echelon.size();

  std::error_code ec;
  std::filesystem::remove(spill, ec);
  return stats;
}

}  // namespace snfp

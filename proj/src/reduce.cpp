#include "snfp/reduce.hpp"

#include <cstdlib>
#include <fstream>

namespace snfp {

std::filesystem::path default_spill_dir() {
  if (const char* env = std::getenv("SNFP_SPILL_DIR"); env && *env) return env;
  return std::filesystem::temp_directory_path();
}

void write_fill_log(const std::filesystem::path& path, const std::vector<std::size_t>& log) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write fill log " + path.string());
  for (auto v : log) out << v << '\n';
  if (!out.flush()) throw io_error("write failed for fill log " + path.string());
}

SnfResult snf(SparseMatrix& a, const SnfOptions& opts) {
  const FieldSpec& f = a.field();
  const Index m = a.rows();
  const Index n = a.cols();
  const Index limit = std::min(m, n);

  std::optional<TranscriptWriter> pw, qw;
  if (opts.emit_p) {
    if (opts.p_path.empty()) throw domain_error("emit_p requires a P transcript path");
    pw.emplace(opts.p_path, Side::Row, m, f);
  }
  if (opts.emit_q) {
    if (opts.q_path.empty()) throw domain_error("emit_q requires a Q transcript path");
    qw.emplace(opts.q_path, Side::Col, n, f);
  }

  SnfResult res;
  std::vector<Index> pivot_row_cols;
  for (Index c = 0;; ++c) {
    // Outside the active region only the c diagonal pivots remain.
    std::size_t active = a.nnz() - c;
    if (!res.disk_hnf.ran && active >= opts.tau && active > 0) {
      res.disk_hnf = disk_hnf(a, c, qw ? &*qw : nullptr, opts.spill_dir);
      active = a.nnz() - c;
    }
    res.fill_log.push_back(active);
    res.peak_active = std::max(res.peak_active, active);
    if (active == 0 || c == limit) break;

    auto piv = opts.reference_pivot ? markowitz_pivot_reference(a, c) : markowitz_pivot(a, c, opts.threads);
    if (!piv) throw internal_error("active region reported nonzero but no pivot was found");

    if (piv->row != c) {
      a.swap_rows(c, piv->row, c);
      if (pw) pw->append(ElementaryOp::swap(c, piv->row));
    }
    if (piv->col != c) {
      a.swap_cols(c, piv->col);
      if (qw) qw->append(ElementaryOp::swap(c, piv->col));
    }

    const FieldValue d = a.col(c).at(c, f);
    const FieldValue d_inv = f.inv(d);

    // Clear row c with column ops: col j -= m col c, recorded as Q_l with
    // Q_l adding m col c to col j. Rows above c are empty in active
    // columns, so an entry in row c is the first one of its column.
    pivot_row_cols.clear();
    Index remaining = a.row_count(c) - 1;
    for (Index j = c + 1; j < n && remaining > 0; ++j) {
      const auto& e = a.col(j).elems();
      if (!e.empty() && index_of(e.front(), f) == c) {
        pivot_row_cols.push_back(j);
        --remaining;
      }
    }
    for (Index j : pivot_row_cols) {
      const FieldValue mult = f.mul(value_of(a.col(j).elems().front(), f), d_inv);
      a.add_col_multiple(c, j, f.neg(mult));
      if (qw) qw->append(ElementaryOp::transvection(c, j, mult));
    }

    // Row c is now the lone pivot, so row i -= m row c only deletes a_ic.
    for (auto e : a.cut_column_below(c, c)) {
      const FieldValue mult = f.mul(value_of(e, f), d_inv);
      if (pw) pw->append(ElementaryOp::transvection(c, index_of(e, f), mult));
    }

    if (opts.normalize_pivots && d != 1) {
      a.set(c, c, 1);
      if (pw) pw->append(ElementaryOp::dilation(c, d));
      res.diag.push_back(1);
    } else {
      res.diag.push_back(d);
    }
  }
  res.rank = res.diag.size();

  if (pw) {
    pw->finish();
    res.p.emplace(opts.p_path);
  }
  if (qw) {
    qw->finish();
    res.q.emplace(opts.q_path);
  }
  if (opts.fill_log_path) write_fill_log(*opts.fill_log_path, res.fill_log);
  return res;
}

}  // namespace snfp

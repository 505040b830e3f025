#include "snfp/sparse.hpp"

#include <algorithm>
#include <string>

namespace snfp {

namespace {

// out = dst + s * src. on_new(i) fires for each index absent from dst that
// appears in out; on_gone(i) for each index of dst that cancelled.
template <class OnNew, class OnGone>
void merge_axpy(const std::vector<SparseElement>& dst, const std::vector<SparseElement>& src,
                FieldValue s, const FieldSpec& f, std::vector<SparseElement>& out,
                OnNew&& on_new, OnGone&& on_gone) {
  out.clear();
  if (s == 0 || src.empty()) {
    out.assign(dst.begin(), dst.end());
    return;
  }
  out.reserve(dst.size() + src.size());
  const unsigned k = f.k();
  auto d = dst.begin(), de = dst.end();
  auto x = src.begin(), xe = src.end();
  while (d != de && x != xe) {
    Index id = d->packed >> k;
    Index ix = x->packed >> k;
    if (id < ix) {
      out.push_back(*d++);
    } else if (ix < id) {
      out.push_back(SparseElement{(ix << k) | f.mul(s, value_of(*x, f))});
      on_new(ix);
      ++x;
    } else {
      FieldValue w = f.add(value_of(*d, f), f.mul(s, value_of(*x, f)));
      if (w != 0)
        out.push_back(SparseElement{(id << k) | w});
      else
        on_gone(id);
      ++d;
      ++x;
    }
  }
  out.insert(out.end(), d, de);
  for (; x != xe; ++x) {
    Index ix = x->packed >> k;
    out.push_back(SparseElement{(ix << k) | f.mul(s, value_of(*x, f))});
    on_new(ix);
  }
}

}  // namespace

SparseVector SparseVector::from_pairs(std::vector<std::pair<Index, FieldValue>> pairs,
                                      const FieldSpec& f) {
  std::sort(pairs.begin(), pairs.end());
  std::vector<SparseElement> elems;
  elems.reserve(pairs.size());
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    if (t > 0 && pairs[t].first == pairs[t - 1].first)
      throw domain_error("repeated index " + std::to_string(pairs[t].first) + " in sparse vector");
    if (pairs[t].second % f.p() != 0) elems.push_back(pack(pairs[t].first, pairs[t].second % f.p(), f));
  }
  return SparseVector(std::move(elems));
}

std::size_t SparseVector::lower_bound(Index index, const FieldSpec& f) const noexcept {
  const std::uint64_t key = index << f.k();
  auto it = std::lower_bound(elems_.begin(), elems_.end(), key,
                             [](SparseElement e, std::uint64_t k) { return e.packed < k; });
  return static_cast<std::size_t>(it - elems_.begin());
}

FieldValue SparseVector::at(Index index, const FieldSpec& f) const noexcept {
  std::size_t pos = lower_bound(index, f);
  if (pos < elems_.size() && index_of(elems_[pos], f) == index) return value_of(elems_[pos], f);
  return 0;
}

bool SparseVector::well_formed(const FieldSpec& f) const noexcept {
  for (std::size_t t = 0; t < elems_.size(); ++t) {
    if (value_of(elems_[t], f) == 0 || value_of(elems_[t], f) >= f.p()) return false;
    if (t > 0 && index_of(elems_[t - 1], f) >= index_of(elems_[t], f)) return false;
  }
  return true;
}

SparseVector axpy(const SparseVector& dst, const SparseVector& src, FieldValue s,
                  const FieldSpec& f) {
  std::vector<SparseElement> out;
  merge_axpy(dst.elems(), src.elems(), s % f.p(), f, out, [](Index) {}, [](Index) {});
  return SparseVector(std::move(out));
}

SparseMatrix::SparseMatrix(Index rows, Index cols, FieldSpec field)
    : rows_(rows), cols_(cols), field_(field), cols_data_(cols), row_counts_(rows, 0) {
  if (rows > 0 && rows - 1 > field.max_index())
    throw domain_error("row count exceeds the packed index range");
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<FieldValue>>& rows,
                                      FieldSpec field) {
  const Index m = rows.size();
  const Index n = m == 0 ? 0 : rows.front().size();
  SparseMatrix a(m, n, field);
  for (Index j = 0; j < n; ++j) {
    std::vector<SparseElement> col;
    for (Index i = 0; i < m; ++i) {
      if (rows[i].size() != n) throw shape_error("ragged dense matrix");
      FieldValue v = rows[i][j] % field.p();
      if (v != 0) col.push_back(pack(i, v, field));
    }
    a.set_column(j, SparseVector(std::move(col)));
  }
  return a;
}

SparseMatrix SparseMatrix::identity(Index n, FieldSpec field) {
  SparseMatrix a(n, n, field);
  for (Index j = 0; j < n; ++j) a.set_column(j, SparseVector({pack(j, 1, field)}));
  return a;
}

void SparseMatrix::check_row(Index i) const {
  if (i >= rows_) throw domain_error("row index " + std::to_string(i) + " out of range");
}
void SparseMatrix::check_col(Index j) const {
  if (j >= cols_) throw domain_error("column index " + std::to_string(j) + " out of range");
}
void SparseMatrix::check_unit(FieldValue u) const {
  if (u == 0 || u >= field_.p()) throw domain_error("scalar must be a nonzero field element");
}

FieldValue SparseMatrix::at(Index i, Index j) const {
  check_row(i);
  check_col(j);
  return cols_data_[j].at(i, field_);
}

void SparseMatrix::set(Index i, Index j, FieldValue v) {
  check_row(i);
  check_col(j);
  if (v >= field_.p()) throw domain_error("value out of range");
  auto& e = cols_data_[j].elems();
  std::size_t pos = cols_data_[j].lower_bound(i, field_);
  const bool present = pos < e.size() && index_of(e[pos], field_) == i;
  if (present && v != 0) {
    e[pos] = pack(i, v, field_);
  } else if (present) {
    e.erase(e.begin() + static_cast<std::ptrdiff_t>(pos));
    --row_counts_[i];
    --nnz_;
  } else if (v != 0) {
    e.insert(e.begin() + static_cast<std::ptrdiff_t>(pos), pack(i, v, field_));
    ++row_counts_[i];
    ++nnz_;
  }
}

void SparseMatrix::set_column(Index j, SparseVector v) {
  check_col(j);
  if (!v.empty() && index_of(v.elems().back(), field_) >= rows_)
    throw domain_error("column entry beyond the row count");
  for (auto e : cols_data_[j]) --row_counts_[index_of(e, field_)];
  nnz_ -= cols_data_[j].nnz();
  for (auto e : v) ++row_counts_[index_of(e, field_)];
  nnz_ += v.nnz();
  cols_data_[j] = std::move(v);
}

SparseVector SparseMatrix::take_column(Index j) {
  check_col(j);
  SparseVector out = std::move(cols_data_[j]);
  cols_data_[j] = SparseVector();
  for (auto e : out) --row_counts_[index_of(e, field_)];
  nnz_ -= out.nnz();
  return out;
}

void SparseMatrix::swap_cols(Index a, Index b) {
  check_col(a);
  check_col(b);
  std::swap(cols_data_[a], cols_data_[b]);
}

void SparseMatrix::add_col_multiple(Index a, Index b, FieldValue v) {
  check_col(a);
  check_col(b);
  if (a == b) throw domain_error("column transvection needs two distinct columns");
  if (v >= field_.p()) throw domain_error("value out of range");
  if (v == 0) return;
  std::size_t added = 0, removed = 0;
  merge_axpy(
      cols_data_[b].elems(), cols_data_[a].elems(), v, field_, scratch_,
      [&](Index i) {
        ++row_counts_[i];
        ++added;
      },
      [&](Index i) {
        --row_counts_[i];
        ++removed;
      });
  nnz_ = nnz_ + added - removed;
  std::swap(cols_data_[b].elems(), scratch_);
}

void SparseMatrix::scale_col(Index a, FieldValue u) {
  check_col(a);
  check_unit(u);
  for (auto& e : cols_data_[a].elems())
    e = SparseElement{(index_of(e, field_) << field_.k()) | field_.mul(value_of(e, field_), u)};
}

void SparseMatrix::swap_rows(Index a, Index b, Index first_col) {
  check_row(a);
  check_row(b);
  if (a == b) return;
  const unsigned k = field_.k();
  for (Index j = first_col; j < cols_; ++j) {
    auto& e = cols_data_[j].elems();
    if (e.empty()) continue;
    std::size_t pa = cols_data_[j].lower_bound(a, field_);
    std::size_t pb = cols_data_[j].lower_bound(b, field_);
    const bool has_a = pa < e.size() && index_of(e[pa], field_) == a;
    const bool has_b = pb < e.size() && index_of(e[pb], field_) == b;
    if (has_a && has_b) {
      FieldValue va = value_of(e[pa], field_);
      e[pa] = SparseElement{(a << k) | value_of(e[pb], field_)};
      e[pb] = SparseElement{(b << k) | va};
    } else if (has_a || has_b) {
      // Relabel the single entry and slide it to its sorted position.
      const std::size_t from = has_a ? pa : pb;
      const Index to_index = has_a ? b : a;
      SparseElement moved{(to_index << k) | value_of(e[from], field_)};
      const std::size_t to = has_a ? pb : pa;
      if (to > from) {
        std::rotate(e.begin() + from, e.begin() + from + 1, e.begin() + to);
        e[to - 1] = moved;
      } else {
        std::rotate(e.begin() + to, e.begin() + from, e.begin() + from + 1);
        e[to] = moved;
      }
    }
  }
  std::swap(row_counts_[a], row_counts_[b]);
}

void SparseMatrix::add_row_multiple(Index a, Index b, FieldValue v, Index first_col) {
  check_row(a);
  check_row(b);
  if (a == b) throw domain_error("row transvection needs two distinct rows");
  if (v >= field_.p()) throw domain_error("value out of range");
  if (v == 0) return;
  const unsigned k = field_.k();
  for (Index j = first_col; j < cols_; ++j) {
    auto& e = cols_data_[j].elems();
    FieldValue va = cols_data_[j].at(a, field_);
    if (va == 0) continue;
    FieldValue delta = field_.mul(v, va);
    std::size_t pb = cols_data_[j].lower_bound(b, field_);
    if (pb < e.size() && index_of(e[pb], field_) == b) {
      FieldValue w = field_.add(value_of(e[pb], field_), delta);
      if (w == 0) {
        e.erase(e.begin() + static_cast<std::ptrdiff_t>(pb));
        --row_counts_[b];
        --nnz_;
      } else {
        e[pb] = SparseElement{(b << k) | w};
      }
    } else {
      e.insert(e.begin() + static_cast<std::ptrdiff_t>(pb), SparseElement{(b << k) | delta});
      ++row_counts_[b];
      ++nnz_;
    }
  }
}

void SparseMatrix::scale_row(Index a, FieldValue u, Index first_col) {
  check_row(a);
  check_unit(u);
  const unsigned k = field_.k();
  for (Index j = first_col; j < cols_; ++j) {
    auto& e = cols_data_[j].elems();
    std::size_t pa = cols_data_[j].lower_bound(a, field_);
    if (pa < e.size() && index_of(e[pa], field_) == a)
      e[pa] = SparseElement{(a << k) | field_.mul(value_of(e[pa], field_), u)};
  }
}

std::vector<SparseElement> SparseMatrix::cut_column_below(Index j, Index i) {
  check_col(j);
  auto& e = cols_data_[j].elems();
  std::size_t pos = cols_data_[j].lower_bound(i + 1, field_);
  std::vector<SparseElement> out(e.begin() + static_cast<std::ptrdiff_t>(pos), e.end());
  e.resize(pos);
  for (auto x : out) --row_counts_[index_of(x, field_)];
  nnz_ -= out.size();
  return out;
}

bool SparseMatrix::counts_consistent() const {
  std::vector<Index> rc(rows_, 0);
  std::size_t total = 0;
  for (const auto& c : cols_data_) {
    if (!c.well_formed(field_)) return false;
    for (auto e : c) {
      Index i = index_of(e, field_);
      if (i >= rows_) return false;
      ++rc[i];
    }
    total += c.nnz();
  }
  return rc == row_counts_ && total == nnz_;
}

std::vector<std::vector<FieldValue>> SparseMatrix::to_dense() const {
  std::vector<std::vector<FieldValue>> d(rows_, std::vector<FieldValue>(cols_, 0));
  for (Index j = 0; j < cols_; ++j)
    for (auto e : cols_data_[j]) d[index_of(e, field_)][j] = value_of(e, field_);
  return d;
}

SparseMatrix transpose(const SparseMatrix& a) {
  SparseMatrix t(a.cols(), a.rows(), a.field());
  const FieldSpec& f = a.field();
  for (Index i = 0; i < a.rows(); ++i) t.cols_data_[i].elems().reserve(a.row_counts_[i]);
  for (Index j = 0; j < a.cols(); ++j) {
    for (auto e : a.cols_data_[j]) {
      Index i = index_of(e, f);
      t.cols_data_[i].elems().push_back(SparseElement{(j << f.k()) | value_of(e, f)});
    }
    t.row_counts_[j] = a.cols_data_[j].nnz();
  }
  t.nnz_ = a.nnz_;
  return t;
}

void elem_col_op(SparseMatrix& a, const ElementaryOp& op) {
  op.validate(a.cols(), a.field());
  switch (op.kind) {
    case ElementaryOp::Kind::Swap:
      a.swap_cols(op.a, op.b);
      break;
    case ElementaryOp::Kind::Transvection:
      a.add_col_multiple(op.a, op.b, op.v);
      break;
    case ElementaryOp::Kind::Dilation:
      a.scale_col(op.a, op.v);
      break;
  }
}

void elem_row_op(SparseMatrix& a, const ElementaryOp& op) {
  op.validate(a.rows(), a.field());
  switch (op.kind) {
    case ElementaryOp::Kind::Swap:
      a.swap_rows(op.a, op.b);
      break;
    case ElementaryOp::Kind::Transvection:
      a.add_row_multiple(op.a, op.b, op.v);
      break;
    case ElementaryOp::Kind::Dilation:
      a.scale_row(op.a, op.v);
      break;
  }
}

void apply_row_ops(SparseMatrix& a, std::span<const ElementaryOp> ops) {
  for (const auto& op : ops) op.validate(a.rows(), a.field());
  SparseMatrix t = transpose(a);
  for (const auto& op : ops) elem_col_op(t, op);
  a = transpose(t);
}

std::size_t nnz_active(const SparseMatrix& a, Index c) {
  std::size_t total = 0;
  for (Index j = c; j < a.cols(); ++j) {
    const auto& col = a.col(j);
    total += col.nnz() - col.lower_bound(c, a.field());
  }
  return total;
}

}  // namespace snfp

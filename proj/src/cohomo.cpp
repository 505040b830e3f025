#include "snfp/cohomo.hpp"

#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "snfp/matrix_io.hpp"

namespace snfp {

namespace {

Error not_a_complex(const std::string& what) { return {ErrorKind::NotAComplex, what}; }
Error not_a_cocycle(const std::string& what) { return {ErrorKind::NotACocycle, what}; }

// y = A x for dense x.
std::vector<FieldValue> mat_vec(const SparseMatrix& a, const std::vector<FieldValue>& x) {
  const FieldSpec& f = a.field();
  std::vector<FieldValue> y(a.rows(), 0);
  for (Index j = 0; j < a.cols(); ++j) {
    if (x[j] == 0) continue;
    for (auto e : a.col(j)) {
      const Index i = index_of(e, f);
      y[i] = f.add(y[i], f.mul(value_of(e, f), x[j]));
    }
  }
  return y;
}

std::map<std::string, std::uint64_t> read_meta(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());
  std::map<std::string, std::uint64_t> kv;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw parse_error(path.string() + ":" + std::to_string(no) + ": expected \"key: value\"");
    try {
      kv[line.substr(0, colon)] = std::stoull(line.substr(colon + 1));
    } catch (const std::exception&) {
      throw parse_error(path.string() + ":" + std::to_string(no) + ": bad value");
    }
  }
  return kv;
}

std::uint64_t meta_get(const std::map<std::string, std::uint64_t>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw parse_error("workspace meta is missing \"" + key + "\"");
  return it->second;
}

}  // namespace

void validate_slice(const ComplexSlice& slice, std::size_t exact_limit) {
  const auto& top = slice.d_top;
  const auto& bottom = slice.d_bottom;
  if (!(top.field() == bottom.field())) throw shape_error("d_top and d_bottom are over different fields");
  if (top.cols() != bottom.rows())
    throw shape_error("d_top is " + std::to_string(top.rows()) + "x" + std::to_string(top.cols()) +
                      " but d_bottom is " + std::to_string(bottom.rows()) + "x" + std::to_string(bottom.cols()));
  const FieldValue p = top.field().p();
  if (slice.arithmetic && (p == 3 || p == 5))
    throw domain_error("characteristic " + std::to_string(p) + " is not allowed for arithmetic complexes");

  const FieldSpec& f = top.field();
  std::size_t work = 0;
  for (Index i = 0; i < bottom.rows(); ++i) work += bottom.row_count(i) * top.col_count(i);
  if (work <= exact_limit) {
    std::vector<FieldValue> acc(top.rows(), 0);
    std::vector<Index> touched;
    for (Index j = 0; j < bottom.cols(); ++j) {
      touched.clear();
      for (auto e : bottom.col(j)) {
        const FieldValue x = value_of(e, f);
        for (auto t : top.col(index_of(e, f))) {
          const Index r = index_of(t, f);
          acc[r] = f.add(acc[r], f.mul(x, value_of(t, f)));
          touched.push_back(r);
        }
      }
      for (Index r : touched) {
        if (acc[r] != 0)
          throw not_a_complex("d_top * d_bottom is nonzero at (" + std::to_string(r + 1) + ", " +
                              std::to_string(j + 1) + ")");
      }
    }
    return;
  }
  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<FieldValue> dist(0, p - 1);
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<FieldValue> r(bottom.cols());
    for (auto& v : r) v = dist(rng);
    auto y = mat_vec(top, mat_vec(bottom, r));
    for (auto v : y)
      if (v != 0) throw not_a_complex("d_top * d_bottom * r is nonzero for a random r");
  }
}

SparseMatrix build_eta(const Transcript& q5, const SparseMatrix& d_bottom, Index rho5) {
  if (q5.side() != Side::Col) throw shape_error("Q5 must be a column transcript");
  if (q5.dim() != d_bottom.rows())
    throw shape_error("Q5 has dimension " + std::to_string(q5.dim()) + " but d_bottom has " +
                      std::to_string(d_bottom.rows()) + " rows");
  if (rho5 > d_bottom.rows()) throw shape_error("rho5 exceeds the row count of d_bottom");
  if (!(q5.field() == d_bottom.field())) throw shape_error("Q5 and d_bottom use different fields");
  const FieldSpec& f = d_bottom.field();

  // Rows of Q5 * d_bottom are columns of d_bottom^T * Q5^T.
  SparseMatrix t = transpose(d_bottom);
  q5.for_each_action(ApplyMode::Left, [&](const ElementaryOp& op) { elem_col_op(t, op); });
  for (Index r = 0; r < rho5; ++r)
    if (!t.col(r).empty())
      throw not_a_complex("row " + std::to_string(r + 1) +
                          " of Q5*d_bottom is nonzero; the inputs do not form a complex or Q5 does not belong to d_top");

  SparseMatrix kept(t.rows(), t.cols() - rho5, f);
  for (Index r = rho5; r < t.cols(); ++r) kept.set_column(r - rho5, t.take_column(r));
  return transpose(kept);
}

CohomologyWorkspace compute_h5(const ComplexSlice& slice, const CohomologyOptions& opts) {
  validate_slice(slice, opts.exact_check_limit);
  const auto& dir = opts.workdir;
  if (dir.empty()) throw domain_error("compute_h5 needs a work directory");
  std::filesystem::create_directories(dir);
  write_matrix_file(dir / "d5.sms", slice.d_top);
  write_matrix_file(dir / "d4.sms", slice.d_bottom);

  const FieldSpec f = slice.d_top.field();
  const Index n6 = slice.d_top.rows();
  const Index n5 = slice.d_top.cols();
  const Index n4 = slice.d_bottom.cols();

  SparseMatrix top = slice.d_top;
  SnfOptions top_opts;
  top_opts.emit_q = true;
  top_opts.q_path = dir / "q5.trn";
  top_opts.threads = opts.threads;
  top_opts.spill_dir = opts.spill_dir;
  if (opts.fill_logs) top_opts.fill_log_path = dir / "fill-d5.log";
  SnfResult top_res = snf(top, top_opts);
  const Index rho5 = top_res.rank;

  SparseMatrix eta = build_eta(*top_res.q, slice.d_bottom, rho5);
  SnfOptions eta_opts;
  eta_opts.emit_p = true;
  eta_opts.p_path = dir / "peta.trn";
  eta_opts.tau = opts.tau;
  eta_opts.threads = opts.threads;
  eta_opts.spill_dir = opts.spill_dir;
  if (opts.fill_logs) eta_opts.fill_log_path = dir / "fill-eta.log";
  SnfResult eta_res = snf(eta, eta_opts);
  const Index rho_eta = eta_res.rank;

  if (rho5 + rho_eta > n5) throw internal_error("rank sum exceeds n5; reductions are inconsistent");
  const Index h5 = n5 - rho5 - rho_eta;
  const Index rows_eta = n5 - rho5;

  // B: identity in the bottom h5 x h5 block. B_bar = P_eta B, padded with
  // rho5 zero rows on top, then basis = Q5^-1 B_bar.
  SparseMatrix b(rows_eta, h5, f);
  for (Index j = 0; j < h5; ++j) b.set_column(j, SparseVector({pack(rho_eta + j, 1, f)}));
  apply(*eta_res.p, b, ApplyMode::Left);
  SparseMatrix basis(n5, h5, f);
  for (Index j = 0; j < h5; ++j) {
    std::vector<SparseElement> shifted;
    shifted.reserve(b.col(j).nnz());
    for (auto e : b.col(j)) shifted.push_back(pack(index_of(e, f) + rho5, value_of(e, f), f));
    basis.set_column(j, SparseVector(std::move(shifted)));
  }
  apply(*top_res.q, basis, ApplyMode::LeftInverse);
  write_matrix_file(dir / "basis.sms", basis);

  {
    std::ofstream meta(dir / "meta.txt");
    meta << "p: " << f.p() << "\nn4: " << n4 << "\nn5: " << n5 << "\nn6: " << n6 << "\nrho5: " << rho5
         << "\nrho_eta: " << rho_eta << "\nh5: " << h5 << "\nh6: " << (n6 - rho5) << '\n';
    if (!meta.flush()) throw io_error("cannot write workspace meta in " + dir.string());
  }

  return CohomologyWorkspace{dir,          f,        n4,     n5,
                             n6,           rho5,     rho_eta, h5,
                             n6 - rho5,    std::move(*top_res.q), std::move(*eta_res.p), std::move(basis),
                             top_res.peak_active, eta_res.peak_active};
}

CohomologyWorkspace load_workspace(const std::filesystem::path& workdir) {
  auto kv = read_meta(workdir / "meta.txt");
  FieldSpec f(static_cast<FieldValue>(meta_get(kv, "p")));
  Transcript q5(workdir / "q5.trn");
  Transcript p_eta(workdir / "peta.trn");
  SparseMatrix basis = read_matrix_file(workdir / "basis.sms");
  CohomologyWorkspace ws{workdir,
                         f,
                         meta_get(kv, "n4"),
                         meta_get(kv, "n5"),
                         meta_get(kv, "n6"),
                         meta_get(kv, "rho5"),
                         meta_get(kv, "rho_eta"),
                         meta_get(kv, "h5"),
                         meta_get(kv, "h6"),
                         std::move(q5),
                         std::move(p_eta),
                         std::move(basis)};
  if (ws.q5.dim() != ws.n5 || ws.q5.side() != Side::Col || ws.p_eta.dim() != ws.n5 - ws.rho5 ||
      ws.p_eta.side() != Side::Row || ws.basis.rows() != ws.n5 || ws.basis.cols() != ws.h5 ||
      ws.rho5 + ws.rho_eta + ws.h5 != ws.n5 || !(ws.basis.field() == f) || !(ws.q5.field() == f))
    throw parse_error("workspace " + workdir.string() + " is inconsistent");
  return ws;
}

std::vector<FieldValue> reduce_cocycle(const CohomologyWorkspace& ws, std::vector<FieldValue> y) {
  if (y.size() != ws.n5)
    throw shape_error("cocycle has length " + std::to_string(y.size()) + ", expected " + std::to_string(ws.n5));
  apply(ws.q5, y, ApplyMode::Left);
  for (Index r = 0; r < ws.rho5; ++r)
    if (y[r] != 0) throw not_a_cocycle("vector is not in the kernel of d_top (coordinate " + std::to_string(r + 1) + " of Q5*y)");
  std::vector<FieldValue> w(y.begin() + static_cast<std::ptrdiff_t>(ws.rho5), y.end());
  apply(ws.p_eta, w, ApplyMode::LeftInverse);
  return {w.begin() + static_cast<std::ptrdiff_t>(ws.rho_eta), w.end()};
}

SparseMatrix reduce_cocycles(const CohomologyWorkspace& ws, const SparseMatrix& y) {
  if (y.rows() != ws.n5)
    throw shape_error("cocycle matrix has " + std::to_string(y.rows()) + " rows, expected " + std::to_string(ws.n5));
  const FieldSpec& f = ws.field;
  SparseMatrix w = y;
  apply(ws.q5, w, ApplyMode::Left);
  SparseMatrix tail(ws.n5 - ws.rho5, y.cols(), f);
  for (Index j = 0; j < y.cols(); ++j) {
    const auto& col = w.col(j);
    if (!col.empty() && index_of(col.elems().front(), f) < ws.rho5)
      throw not_a_cocycle("column " + std::to_string(j + 1) + " is not in the kernel of d_top");
    std::vector<SparseElement> shifted;
    for (auto e : col) shifted.push_back(pack(index_of(e, f) - ws.rho5, value_of(e, f), f));
    tail.set_column(j, SparseVector(std::move(shifted)));
  }
  apply(ws.p_eta, tail, ApplyMode::LeftInverse);
  SparseMatrix s(ws.h5, y.cols(), f);
  for (Index j = 0; j < y.cols(); ++j) {
    std::vector<SparseElement> coords;
    const auto& col = tail.col(j);
    for (std::size_t t = col.lower_bound(ws.rho_eta, f); t < col.nnz(); ++t)
      coords.push_back(pack(index_of(col.elems()[t], f) - ws.rho_eta, value_of(col.elems()[t], f), f));
    s.set_column(j, SparseVector(std::move(coords)));
  }
  return s;
}

SparseMatrix hecke_matrix(const CohomologyWorkspace& ws, const SparseMatrix& translates) {
  if (translates.cols() != ws.h5)
    throw shape_error("expected " + std::to_string(ws.h5) + " translates, got " + std::to_string(translates.cols()));
  return reduce_cocycles(ws, translates);
}

}  // namespace snfp

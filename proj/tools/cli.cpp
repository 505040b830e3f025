#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include "snfp/cohomo.hpp"
#include "snfp/matrix_io.hpp"
#include "snfp/predict.hpp"
#include "snfp/reduce.hpp"

namespace snfp::cli {

namespace {

namespace fs = std::filesystem;

struct RunConfig {
  FieldValue prime = kDefaultPrime;
  bool prime_given = false;
  std::string tau = "inf";
  fs::path workdir = "snfp-work";
  std::string fill_log;
  bool normalize = false;
  bool emit_p = false;
  bool emit_q = false;
  int threads = 1;
};

std::size_t parse_tau(const std::string& s) {
  if (s == "inf" || s == "infinity") return kTauInfinity;
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty() || s[0] == '-') throw parse_error("--tau expects a nonnegative integer or \"inf\"");
  return static_cast<std::size_t>(v);
}

void check_prime(const RunConfig& cfg, const SparseMatrix& a, const std::string& what) {
  if (cfg.prime_given && a.field().p() != cfg.prime)
    throw shape_error(what + " is over F_" + std::to_string(a.field().p()) + " but --prime is " +
                      std::to_string(cfg.prime));
}

int cmd_snf(const RunConfig& cfg, const std::string& matrix_path, std::ostream& out) {
  SparseMatrix a = read_matrix_file(matrix_path);
  check_prime(cfg, a, matrix_path);
  fs::create_directories(cfg.workdir);
  SnfOptions opts;
  opts.emit_p = cfg.emit_p;
  opts.emit_q = cfg.emit_q;
  opts.p_path = cfg.workdir / "P.trn";
  opts.q_path = cfg.workdir / "Q.trn";
  opts.tau = parse_tau(cfg.tau);
  opts.normalize_pivots = cfg.normalize;
  opts.threads = cfg.threads;
  if (!cfg.fill_log.empty()) opts.fill_log_path = cfg.fill_log;

  const Index m = a.rows(), n = a.cols();
  const std::size_t nnz = a.nnz();
  SnfResult r = snf(a, opts);
  write_matrix_file(cfg.workdir / "D.sms", a);

  out << "m: " << m << '\n'
      << "n: " << n << '\n'
      << "p: " << a.field().p() << '\n'
      << "nnz: " << nnz << '\n'
      << "rank: " << r.rank << '\n'
      << "peak_active: " << r.peak_active << '\n'
      << "disk_hnf: " << (r.disk_hnf.ran ? "yes" : "no") << '\n';
  if (r.disk_hnf.ran) out << "disk_hnf_pivot_index: " << r.disk_hnf.pivot_index << '\n';
  out << "d: " << (cfg.workdir / "D.sms").string() << '\n';
  if (r.p) out << "p_transcript: " << r.p->path().string() << "\np_records: " << r.p->size() << '\n';
  if (r.q) out << "q_transcript: " << r.q->path().string() << "\nq_records: " << r.q->size() << '\n';
  if (opts.fill_log_path) out << "fill_log: " << opts.fill_log_path->string() << '\n';
  return 0;
}

int cmd_cohomology(const RunConfig& cfg, bool fill_logs, const std::string& d5_path,
                   const std::string& d4_path, std::ostream& out) {
  ComplexSlice slice{read_matrix_file(d5_path), read_matrix_file(d4_path), true};
  check_prime(cfg, slice.d_top, d5_path);
  check_prime(cfg, slice.d_bottom, d4_path);
  CohomologyOptions opts;
  opts.workdir = cfg.workdir;
  opts.tau = parse_tau(cfg.tau);
  opts.threads = cfg.threads;
  opts.fill_logs = fill_logs;
  CohomologyWorkspace ws = compute_h5(slice, opts);
  out << "n4: " << ws.n4 << '\n'
      << "n5: " << ws.n5 << '\n'
      << "n6: " << ws.n6 << '\n'
      << "rho5: " << ws.rho5 << '\n'
      << "rho_eta: " << ws.rho_eta << '\n'
      << "h5: " << ws.h5 << '\n'
      << "h6: " << ws.h6 << '\n'
      << "workdir: " << ws.workdir.string() << '\n';
  return 0;
}

int cmd_reduce(const std::string& workdir, const std::string& cocycle_path, std::ostream& out) {
  CohomologyWorkspace ws = load_workspace(workdir);
  SparseMatrix y = read_matrix_file(cocycle_path);
  if (!(y.field() == ws.field)) throw shape_error("cocycle file and workspace use different fields");
  SparseMatrix s = reduce_cocycles(ws, y);
  out << "h5: " << ws.h5 << '\n';
  out << "cocycles: " << y.cols() << '\n';
  for (Index j = 0; j < s.cols(); ++j) {
    out << "s_" << (j + 1) << ':';
    for (Index i = 0; i < ws.h5; ++i) out << ' ' << s.col(j).at(i, ws.field);
    out << '\n';
  }
  return 0;
}

int cmd_predict(std::uint64_t level, std::ostream& out) {
  LevelArithmetic la = level_arithmetic(level);
  const Rational c = p3_constant(level);
  std::ostringstream fact;
  for (std::size_t t = 0; t < la.factorization.size(); ++t) {
    if (t) fact << '*';
    fact << la.factorization[t].first;
    if (la.factorization[t].second > 1) fact << '^' << la.factorization[t].second;
  }
  out << "N: " << level << '\n'
      << "factorization: " << fact.str() << '\n'
      << "p3_size: " << la.p3 << '\n'
      << "p3_constant: " << std::setprecision(3)
      << static_cast<double>(c.numerator()) / static_cast<double>(c.denominator()) << '\n'
      << "n6_est: " << la.n6_est << '\n'
      << "n5_est: " << la.n5_est << '\n'
      << "n4_est: " << la.n4_est << '\n';
  if (is_prime(level)) {
    const std::int64_t all = dim_paramodular3(level);
    const std::int64_t lifts = dim_jacobi_cusp3(level);
    out << "dim_P3: " << all << '\n' << "dim_P3_G: " << lifts << '\n' << "dim_P3_nG: " << all - lifts << '\n';
  }
  return 0;
}

int cmd_check_table(const std::string& csv_path, std::ostream& out) {
  BettiReport report = check_table(read_betti_csv_file(csv_path));
  std::size_t passed = 0;
  for (const auto& r : report.rows) {
    const bool png_ok = !r.png_formula || *r.png_formula == r.row.png;
    const bool ok = r.ok && png_ok;
    passed += ok;
    out << "N=" << r.row.level << ": " << (ok ? "pass" : "FAIL") << " (h5 " << r.row.h5 << ", predicted "
        << r.predicted;
    if (r.png_formula) out << "; pnG " << r.row.png << ", formula " << *r.png_formula;
    out << ")\n";
  }
  out << "passed: " << passed << '/' << report.rows.size() << '\n';
  return passed == report.rows.size() ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact sparse Smith normal form over F_p, cochain cohomology, and level-N predictions"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--prime", cfg.prime, "field characteristic; must match the input header")
        ->check(CLI::Range(3u, 32767u));
    sub->add_option("--workdir", cfg.workdir, "directory for outputs and transcripts");
    sub->add_option("--tau", cfg.tau, "active-region nonzeros that trigger disk HNF (integer or inf)");
    sub->add_option("--threads", cfg.threads, "threads for the pivot search")->check(CLI::PositiveNumber);
  };

  std::string matrix_path;
  auto* snf_cmd = app.add_subcommand("snf", "Smith normal form of a matrix file");
  snf_cmd->add_option("matrix", matrix_path, "matrix text file")->required();
  add_common(snf_cmd);
  snf_cmd->add_option("--fill-log", cfg.fill_log, "write active-region nonzeros per pivot");
  snf_cmd->add_flag("--normalize", cfg.normalize, "scale pivots to 1 (row dilations in P)");
  snf_cmd->add_flag("--emit-p", cfg.emit_p, "write the row transcript P.trn");
  snf_cmd->add_flag("--emit-q", cfg.emit_q, "write the column transcript Q.trn");

  std::string d5_path, d4_path;
  bool fill_logs = false;
  auto* coh_cmd = app.add_subcommand("cohomology", "H^5 of the complex C6 <- C5 <- C4");
  coh_cmd->add_option("d5", d5_path, "top differential (n6 x n5)")->required();
  coh_cmd->add_option("d4", d4_path, "bottom differential (n5 x n4)")->required();
  add_common(coh_cmd);
  coh_cmd->add_flag("--fill-log", fill_logs, "write fill-d5.log and fill-eta.log into the workdir");

  std::string red_workdir, cocycle_path;
  auto* red_cmd = app.add_subcommand("reduce", "coordinates of cocycles in the stored cohomology basis");
  red_cmd->add_option("workdir", red_workdir, "work directory written by 'cohomology'")->required();
  red_cmd->add_option("cocycles", cocycle_path, "matrix file, one cocycle per column")->required();

  std::uint64_t level = 0;
  auto* pred_cmd = app.add_subcommand("predict", "complex sizes and paramodular dimensions at level N");
  pred_cmd->add_option("N", level, "level")->required();

  std::string csv_path;
  auto* table_cmd = app.add_subcommand("check-table", "check 2(s2 + sl3 + pnG) + s4_0 = h5 on a Betti table");
  table_cmd->add_option("csv", csv_path, "CSV with header N,s2,s4_0,sl3,pnG,h5")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  cfg.prime_given = false;
  for (auto* sub : {snf_cmd, coh_cmd})
    if (sub->parsed() && sub->count("--prime") > 0) cfg.prime_given = true;

  try {
    if (cfg.prime_given) FieldSpec check(cfg.prime);
    if (snf_cmd->parsed()) return cmd_snf(cfg, matrix_path, out);
    if (coh_cmd->parsed()) {
      if (cfg.prime_given && (cfg.prime == 3 || cfg.prime == 5))
        throw domain_error("cohomology needs a characteristic other than 2, 3, 5");
      return cmd_cohomology(cfg, fill_logs, d5_path, d4_path, out);
    }
    if (red_cmd->parsed()) return cmd_reduce(red_workdir, cocycle_path, out);
    if (pred_cmd->parsed()) return cmd_predict(level, out);
    if (table_cmd->parsed()) return cmd_check_table(csv_path, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::Io);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::Internal);
  }
  return static_cast<int>(ErrorKind::Internal);
}

}  // namespace snfp::cli

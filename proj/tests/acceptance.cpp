// Acceptance run: one PASS/FAIL line per criterion.
//
// The out-of-core stress criterion takes long and runs only with
// SNFP_ACCEPT_LONG=1. SNFP_ACCEPT_MEM_MB sets its peak-memory bound
// (default 4096).

#include <sys/resource.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "snfp/predict.hpp"
#include "snfp/reduce.hpp"
#include "suites.hpp"
#include "support.hpp"

using namespace snfp;
using testing_support::TempDir;

namespace {

int failures = 0;

struct Outcome {
  bool pass;
  std::string detail;
};

void report(const char* id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("[%s] %s %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

long peak_rss_mb() {
  rusage ru{};
  getrusage(RUSAGE_SELF, &ru);
  return ru.ru_maxrss / 1024;
}

Outcome snf_suite() {
  constexpr int kMatrices = 520;
  constexpr double kBudget = 60.0;
  TempDir dir("acc-snf");
  std::mt19937_64 rng(0xacc1);
  const auto t0 = std::chrono::steady_clock::now();
  for (int t = 0; t < kMatrices; ++t) {
    const std::int64_t p = t % 2 ? 7 : 12379;
    auto sc = suites::draw_snf_case(rng, p);
    auto dense = oracle::random_sparse(sc.rows, sc.cols, sc.density, p, rng);
    for (std::size_t tau : {kTauInfinity, std::size_t{1}}) {
      auto msg = suites::check_snf(dense, sc, tau, dir.path());
      if (!msg.empty()) return {false, "matrix " + std::to_string(t) + ": " + msg};
    }
  }
  const double secs = elapsed_since(t0);
  std::ostringstream s;
  s << kMatrices << " matrices over F7 and F12379 up to 64x96, rank and P D Q == A for tau=inf and tau=1";
  if (secs >= kBudget) return {false, s.str() + "; over the " + std::to_string(int(kBudget)) + " s budget"};
  return {true, s.str()};
}

Outcome cohomology_suite() {
  constexpr int kSlices = 110;
  constexpr double kBudget = 120.0;
  TempDir dir("acc-coh");
  std::mt19937_64 rng(0xacc2);
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t with_cohomology = 0;
  for (int t = 0; t < kSlices; ++t) {
    const std::int64_t p = t % 2 ? 7 : 12379;
    auto sc = suites::draw_slice(rng, p);
    const std::size_t h5 = sc.n5 - oracle::rank(sc.top, p) - oracle::rank(sc.bottom, p);
    with_cohomology += h5 > 0;
    auto msg = suites::check_slice(sc, rng, dir / ("w" + std::to_string(t)));
    if (!msg.empty()) return {false, "slice " + std::to_string(t) + ": " + msg};
  }
  const double secs = elapsed_since(t0);
  std::ostringstream s;
  s << kSlices << " slices up to 30x50x70 (" << with_cohomology
    << " with h5 > 0): h5, cocycle basis, independence, reduce_cocycle identities";
  if (secs >= kBudget) return {false, s.str() + "; over budget"};
  return {true, s.str()};
}

Outcome size_formulas() {
  std::ostringstream s;
  bool ok = true;
  const auto p53 = p3_size(53), p211 = p3_size(211);
  ok = ok && p53 == 151740 && p211 == 9438664;
  s << "|P3|(53)=" << p53 << " |P3|(211)=" << p211;
  const auto la = level_arithmetic(211);
  struct Est {
    const char* name;
    std::uint64_t est, actual;
  } ests[] = {{"n6", la.n6_est, 98351}, {"n5", la.n5_est, 944046}, {"n4", la.n4_est, 3277686}};
  const std::uint64_t want[] = {98319, 943866, 3277314};
  for (int k = 0; k < 3; ++k) {
    const double rel = std::fabs(double(ests[k].est) - double(ests[k].actual)) / double(ests[k].actual);
    ok = ok && ests[k].est == want[k] && rel <= 0.0006;
    char buf[96];
    std::snprintf(buf, sizeof buf, " %s=%llu (%.3f%% off)", ests[k].name,
                  static_cast<unsigned long long>(ests[k].est), 100 * rel);
    s << buf;
  }
  const Rational c = p3_constant(210);
  char cbuf[32];
  std::snprintf(cbuf, sizeof cbuf, "%.3g", boost::rational_cast<double>(c));
  ok = ok && std::string(cbuf) == "4.04";
  s << " constant(210)=" << cbuf;
  return {ok, s.str()};
}

Outcome paramodular_formulas() {
  constexpr double kBudget = 5.0;
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream s;
  bool ok = dim_paramodular3(2) == 0 && dim_paramodular3(3) == 0 && dim_paramodular3(5) == 0;
  s << "dim P3(2,3,5)=0";
  int primes = 0;
  for (std::uint64_t n = 2; n < 1000; ++n) {
    if (!is_prime(n)) continue;
    const Rational d = dim_paramodular3_exact(n);
    if (d.denominator() != 1 || d.numerator() < 0) {
      ok = false;
      s << "; N=" << n << " not a nonnegative integer";
    }
    ++primes;
  }
  s << ", integral at " << primes << " primes < 1000";
  const auto rows = read_betti_csv_file(SNFP_DATA_DIR "/bettitab.csv");
  int agree = 0;
  for (const auto& r : rows) agree += dim_paramodular3(r.level) - dim_jacobi_cusp3(r.level) == r.png;
  ok = ok && rows.size() == 25 && agree == 25;
  s << ", dim P3 - dim J = pnG on " << agree << "/" << rows.size() << " rows";
  if (elapsed_since(t0) >= kBudget) {
    ok = false;
    s << "; over budget";
  }
  return {ok, s.str()};
}

Outcome betti_identity() {
  const auto rows = read_betti_csv_file(SNFP_DATA_DIR "/bettitab.csv");
  const auto rep = check_table(rows);
  bool ok = rows.size() == 25 && rep.mismatches == 0;
  const std::pair<std::uint64_t, std::int64_t> spots[] = {{83, 21}, {89, 28}, {127, 40}, {193, 73}, {211, 77}};
  int spot_ok = 0;
  for (auto [level, h5] : spots)
    for (const auto& r : rows)
      if (r.level == level && predict_h5(r) == h5) ++spot_ok;
  ok = ok && spot_ok == 5;
  std::ostringstream s;
  s << (rows.size() - rep.mismatches) << "/" << rows.size() << " rows satisfy 2(s2+sl3+pnG)+s4_0=h5, "
    << spot_ok << "/5 spot values";
  return {ok, s.str()};
}

Outcome hecke_properties() {
  std::mt19937_64 rng(0xacc6);
  const std::uint64_t primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
  int spin_ok = 0;
  for (int t = 0; t < 100; ++t) {
    const auto l = primes[rng() % 15];
    const Rational d1(static_cast<std::int64_t>(rng() % 20001) - 10000);
    const Rational d2(static_cast<std::int64_t>(rng() % 20001) - 10000);
    const auto h = hecke_poly_spin(l, d1, d2);
    const Rational l3(static_cast<std::int64_t>(l * l * l));
    spin_ok += h.coeffs[0] == GammaLinear(1) && h.coeffs[4] == GammaLinear(l3 * l3) &&
               h.coeffs[3] == GammaLinear(l3) * h.coeffs[1];
  }

  int families_ok = 0, families = 0;
  for (auto l : primes) {
    const GammaLinear x(static_cast<std::int64_t>(rng() % 101) - 50);
    const HeckePolynomial polys[] = {
        hecke_poly_gl4(l, {Rational(1), Rational(3), Rational(-2), Rational(5), Rational(7)}),
        hecke_poly_family(HeckeFamily::IIa, l, FamilyParams::with_alpha(x)),
        hecke_poly_family(HeckeFamily::IIb, l, FamilyParams::with_alpha(x)),
        hecke_poly_family(HeckeFamily::IV, l, FamilyParams::with_beta(x)),
        hecke_poly_family(HeckeFamily::IIIa, l, FamilyParams::formal_gamma()),
        hecke_poly_family(HeckeFamily::IIIb, l, FamilyParams::formal_gamma()),
        hecke_poly_spin(l, Rational(1), Rational(1))};
    for (const auto& h : polys) {
      ++families;
      families_ok += h.at_zero() == GammaLinear(1);
    }
  }

  auto as_ints = [](const HeckePolynomial& h) {
    std::vector<std::int64_t> v;
    for (const auto& c : h.coeffs) v.push_back(c.is_rational() && c.r.denominator() == 1 ? c.r.numerator() : 999999);
    return v;
  };
  const bool iia = as_ints(hecke_poly_family(HeckeFamily::IIa, 2, FamilyParams::with_alpha(0))) ==
                   std::vector<std::int64_t>{1, -12, 34, -24, 64};
  const bool iib = as_ints(hecke_poly_family(HeckeFamily::IIb, 2, FamilyParams::with_alpha(0))) ==
                   std::vector<std::int64_t>{1, -3, 34, -96, 64};
  std::ostringstream s;
  s << "spin symmetry " << spin_ok << "/100, constant term 1 for " << families_ok << "/" << families
    << " family polynomials, IIa example " << (iia ? "ok" : "wrong") << ", IIb example " << (iib ? "ok" : "wrong");
  return {spin_ok == 100 && families_ok == families && iia && iib, s.str()};
}

// Random m x n matrix with 1..max_per_col nonzeros per column.
SparseMatrix random_columns(Index m, Index n, unsigned max_per_col, std::uint64_t seed) {
  FieldSpec f(kDefaultPrime);
  SparseMatrix a(m, n, f);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> row(0, m - 1);
  std::uniform_int_distribution<FieldValue> val(1, f.p() - 1);
  std::uniform_int_distribution<unsigned> count(1, max_per_col);
  for (Index j = 0; j < n; ++j) {
    std::vector<std::pair<Index, FieldValue>> col;
    const unsigned k = count(rng);
    while (col.size() < k) {
      const Index i = row(rng);
      bool dup = false;
      for (auto& e : col) dup = dup || e.first == i;
      if (!dup) col.emplace_back(i, val(rng));
    }
    a.set_column(j, SparseVector::from_pairs(std::move(col), f));
  }
  return a;
}

Outcome stress() {
  const char* mem_env = std::getenv("SNFP_ACCEPT_MEM_MB");
  const long bound_mb = mem_env ? std::atol(mem_env) : 4096;
  std::ostringstream s;

  // Downscale first: both paths must give the same rank. Markowitz makes
  // no fill on these shapes, so the active count only falls and any tau
  // below the input size switches to disk HNF at the first pivot.
  auto small = random_columns(5000, 15000, 6, 0x5ca1e);
  auto small_disk = small;
  SnfOptions pure;
  SnfOptions disk;
  disk.tau = small.nnz() / 2;
  const auto r_pure = snf(small, pure);
  const auto r_disk = snf(small_disk, disk);
  s << "5000x15000: rank " << r_pure.rank << " (Markowitz) vs " << r_disk.rank << " (disk HNF at c="
    << r_disk.disk_hnf.pivot_index << ", peak echelon nnz " << r_disk.disk_hnf.peak_echelon_nnz << ")";
  bool ok = r_pure.rank == r_disk.rank && r_disk.disk_hnf.ran;

  auto big = random_columns(50'000, 150'000, 6, 0xb16);
  SnfOptions opts;
  opts.tau = 2'000'000;
  const auto r = snf(big, opts);
  const long peak = peak_rss_mb();
  s << "; 50000x150000: rank " << r.rank << ", disk HNF " << (r.disk_hnf.ran ? "ran" : "did not run")
    << ", fill log ends at " << r.fill_log.back() << ", peak active " << r.peak_active << ", peak RSS " << peak
    << " MB (bound " << bound_mb << " MB)";
  ok = ok && r.fill_log.back() == 0 && peak < bound_mb;
  return {ok, s.str()};
}

}  // namespace

int main() {
  report("C1", "SNF oracle suite", snf_suite);
  report("C2", "cohomology oracle suite", cohomology_suite);
  report("C3", "size formulas", size_formulas);
  report("C4", "paramodular formulas", paramodular_formulas);
  report("C5", "Betti identity", betti_identity);
  report("C6", "Hecke polynomial properties", hecke_properties);
  const char* long_env = std::getenv("SNFP_ACCEPT_LONG");
  if (long_env && std::string(long_env) == "1") {
    report("C7", "out-of-core stress", stress);
  } else {
    std::printf("[SKIP] C7 out-of-core stress: long run, set SNFP_ACCEPT_LONG=1 to enable\n");
  }
  std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}

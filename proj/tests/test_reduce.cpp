#include <doctest.h>

#include <fstream>
#include <random>

#include "snfp/markowitz.hpp"
#include "snfp/reduce.hpp"
#include "suites.hpp"
#include "support.hpp"

using namespace snfp;
using testing_support::TempDir;
using testing_support::to_dense;
using testing_support::to_sparse;

TEST_CASE("markowitz examples") {
  FieldSpec f(7);
  auto id = SparseMatrix::identity(2, f);
  CHECK(markowitz_pivot(id, 0) == Pivot{0, 0, 0});

  auto a = SparseMatrix::from_dense({{1, 1, 1}, {1, 0, 0}}, f);
  CHECK(markowitz_pivot(a, 0) == Pivot{0, 1, 0});
  CHECK(markowitz_pivot_reference(a, 0) == Pivot{0, 1, 0});

  SparseMatrix z(3, 4, f);
  CHECK_FALSE(markowitz_pivot(z, 0).has_value());
  CHECK_FALSE(markowitz_pivot_reference(z, 0).has_value());

  // Entries outside the active region are ignored but still count.
  auto b = SparseMatrix::from_dense({{1, 1, 0}, {0, 1, 1}, {0, 1, 1}}, f);
  auto pv = markowitz_pivot(b, 1);
  REQUIRE(pv);
  CHECK(*pv == Pivot{1, 2, 1});
}

TEST_CASE("pruned and threaded pivot search agree with the reference") {
  std::mt19937_64 rng(123);
  for (int t = 0; t < 300; ++t) {
    const std::size_t m = 1 + rng() % 40, n = 1 + rng() % 60;
    auto d = oracle::random_sparse(m, n, 0.02 + (rng() % 20) / 100.0, 7, rng);
    auto a = to_sparse(d, m, n, 7);
    const Index c = rng() % (std::min(m, n) + 1);
    const auto ref = markowitz_pivot_reference(a, c);
    REQUIRE(markowitz_pivot(a, c) == ref);
    REQUIRE(markowitz_pivot(a, c, 4) == ref);
  }
  // Wide enough to take the parallel branch.
  auto d = oracle::random_sparse(50, 3000, 0.01, 12379, rng);
  auto a = to_sparse(d, 50, 3000, 12379);
  CHECK(markowitz_pivot(a, 0, 4) == markowitz_pivot_reference(a, 0));
}

TEST_CASE("snf examples") {
  TempDir dir("snf");
  FieldSpec f(7);
  SparseMatrix z(3, 5, f);
  SnfOptions opts;
  opts.emit_p = opts.emit_q = true;
  opts.p_path = dir / "p.trn";
  opts.q_path = dir / "q.trn";
  auto r = snf(z, opts);
  CHECK(r.rank == 0);
  CHECK(r.p->size() == 0);
  CHECK(r.q->size() == 0);
  CHECK(r.fill_log == std::vector<std::size_t>{0});

  auto a = SparseMatrix::from_dense({{0, 2}, {3, 0}}, f);
  auto d = a;
  r = snf(d, opts);
  CHECK(r.rank == 2);
  CHECK(d.nnz() == 2);
  auto x = d;
  apply(*r.p, x, ApplyMode::Left);
  apply(*r.q, x, ApplyMode::Right);
  CHECK(x == a);
}

TEST_CASE("snf only returns the requested transcripts") {
  TempDir dir("snf");
  FieldSpec f(7);
  auto a = SparseMatrix::from_dense({{1, 2, 3}, {4, 5, 6}}, f);
  SnfOptions opts;
  opts.emit_q = true;
  opts.q_path = dir / "q.trn";
  auto r = snf(a, opts);
  CHECK_FALSE(r.p.has_value());
  REQUIRE(r.q.has_value());
  CHECK(r.rank == 2);
  CHECK_FALSE(std::filesystem::exists(dir / "p.trn"));

  SnfOptions bad;
  bad.emit_p = true;
  auto b = a;
  CHECK_THROWS_AS(snf(b, bad), Error);
}

TEST_CASE("normalized pivots record dilations and give unit diagonal") {
  TempDir dir("snf");
  std::mt19937_64 rng(31);
  for (int t = 0; t < 30; ++t) {
    auto sc = suites::draw_snf_case(rng, 12379, 20, 30);
    auto dense = oracle::random_sparse(sc.rows, sc.cols, 0.2, sc.p, rng);
    auto a = to_sparse(dense, sc.rows, sc.cols, sc.p);
    auto d = a;
    SnfOptions opts;
    opts.emit_p = opts.emit_q = opts.normalize_pivots = true;
    opts.p_path = dir / "p.trn";
    opts.q_path = dir / "q.trn";
    auto r = snf(d, opts);
    for (Index c = 0; c < r.rank; ++c) REQUIRE(d.at(c, c) == 1);
    apply(*r.p, d, ApplyMode::Left);
    apply(*r.q, d, ApplyMode::Right);
    REQUIRE(d == a);
  }
}

TEST_CASE("snf against the dense oracle, both tau paths") {
  TempDir dir("snf");
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 80; ++t) {
    const std::int64_t p = t % 2 ? 7 : 12379;
    auto sc = suites::draw_snf_case(rng, p);
    auto dense = oracle::random_sparse(sc.rows, sc.cols, sc.density, p, rng);
    for (std::size_t tau : {kTauInfinity, std::size_t{1}}) {
      const auto msg = suites::check_snf(dense, sc, tau, dir.path());
      REQUIRE_MESSAGE(msg.empty(), msg);
    }
  }
}

TEST_CASE("reference pivot search gives the same factorization") {
  TempDir dir("snf");
  std::mt19937_64 rng(77);
  for (int t = 0; t < 20; ++t) {
    auto dense = oracle::random_sparse(30, 40, 0.1, 7, rng);
    auto a = to_sparse(dense, 30, 40, 7);
    auto d1 = a, d2 = a;
    SnfOptions o1, o2;
    o2.reference_pivot = true;
    auto r1 = snf(d1, o1);
    auto r2 = snf(d2, o2);
    REQUIRE(d1 == d2);
    REQUIRE(r1.fill_log == r2.fill_log);
  }
}

TEST_CASE("fill log") {
  TempDir dir("snf");
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    auto dense = oracle::random_sparse(1 + rng() % 30, 1 + rng() % 30, 0.15, 7, rng);
    auto a = to_sparse(dense, dense.size(), dense[0].size(), 7);
    SnfOptions opts;
    opts.fill_log_path = dir / "fill.log";
    opts.tau = t % 2 ? kTauInfinity : 5;
    opts.spill_dir = dir.path();
    const Index limit = std::min(a.rows(), a.cols());
    const std::size_t first = a.nnz();
    auto r = snf(a, opts);
    REQUIRE(r.fill_log.back() == 0);
    REQUIRE(r.fill_log.size() <= limit + 1);
    REQUIRE(r.fill_log.size() == r.rank + 1);
    if (opts.tau == kTauInfinity) REQUIRE(r.fill_log.front() == first);
    std::ifstream in(dir / "fill.log");
    std::vector<std::size_t> read;
    for (std::size_t v; in >> v;) read.push_back(v);
    REQUIRE(read == r.fill_log);
  }
}

TEST_CASE("disk hnf examples") {
  TempDir dir("hnf");
  FieldSpec f(7);

  SUBCASE("already echelon") {
    auto a = SparseMatrix::from_dense({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, f);
    auto before = a;
    auto s = disk_hnf(a, 0, nullptr, dir.path());
    CHECK(s.ran);
    CHECK(s.echelon_columns == 3);
    CHECK(a == before);
  }
  SUBCASE("zero column goes last") {
    auto a = SparseMatrix::from_dense({{0, 0, 2}, {0, 3, 0}}, f);
    auto s = disk_hnf(a, 0, nullptr, dir.path());
    CHECK(s.echelon_columns == 2);
    CHECK(a.col_count(2) == 0);
    CHECK(a.at(0, 0) == 2);
    CHECK(a.at(1, 1) == 3);
  }
  SUBCASE("random 6x9 over F7") {
    std::mt19937_64 rng(69);
    for (int t = 0; t < 50; ++t) {
      auto dense = oracle::random_sparse(6, 9, 0.3, 7, rng);
      auto a = to_sparse(dense, 6, 9, 7);
      auto before = a;
      TranscriptWriter w(dir / "q.trn", Side::Col, 9, f);
      auto s = disk_hnf(a, 0, &w, dir.path());
      w.finish();
      REQUIRE(s.echelon_columns == oracle::rank(dense, 7));
      REQUIRE(a.counts_consistent());
      // Echelon columns first, ascending pivots, then zero columns.
      Index last = 0;
      for (Index j = 0; j < 9; ++j) {
        if (j < s.echelon_columns) {
          REQUIRE(a.col_count(j) > 0);
          const Index piv = index_of(a.col(j).elems().front(), f);
          if (j > 0) REQUIRE(piv > last);
          last = piv;
          REQUIRE(a.row_count(piv) == 1);  // fully reduced
        } else {
          REQUIRE(a.col_count(j) == 0);
        }
      }
      // The recorded Q undoes the column ops: after * Q == before.
      Transcript q(dir / "q.trn");
      apply(q, a, ApplyMode::Right);
      REQUIRE(a == before);
    }
  }
}

TEST_CASE("disk hnf at an interior corner leaves the finished block alone") {
  TempDir dir("hnf");
  FieldSpec f(7);
  auto a = SparseMatrix::from_dense({{5, 0, 0, 0}, {0, 1, 2, 0}, {0, 3, 6, 4}}, f);
  auto s = disk_hnf(a, 1, nullptr, dir.path());
  CHECK(s.pivot_index == 1);
  CHECK(s.spilled_nnz == 5);
  CHECK(s.echelon_columns == 2);
  CHECK(a.at(0, 0) == 5);
  CHECK(a.col_count(3) == 0);
  CHECK(oracle::rank(to_dense(a), 7) == 3);
}

TEST_CASE("disk hnf removes its spill file") {
  TempDir dir("hnf");
  std::mt19937_64 rng(1);
  auto dense = oracle::random_sparse(20, 30, 0.2, 7, rng);
  auto a = to_sparse(dense, 20, 30, 7);
  disk_hnf(a, 0, nullptr, dir.path());
  CHECK(std::filesystem::is_empty(dir.path()));
  CHECK_THROWS_AS(disk_hnf(a, 0, nullptr, dir / "no-such-dir"), Error);
}

TEST_CASE("echelon size respects the co-rank bound") {
  TempDir dir("hnf");
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    const std::size_t m = 2 + rng() % 20, n = m + rng() % 30;
    auto dense = oracle::random_sparse(m, n, 0.3, 12379, rng);
    // Force full row rank with an identity block in the first m columns.
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) dense[i][j] = i == j;
    const std::size_t rank = oracle::rank(dense, 12379);
    auto a = to_sparse(dense, m, n, 12379);
    auto s = disk_hnf(a, 0, nullptr, dir.path());
    REQUIRE(rank == m);
    REQUIRE(s.echelon_columns == rank);
    REQUIRE(s.peak_echelon_columns <= m);
    REQUIRE(s.final_echelon_nnz <= (m - rank) * rank + rank);
  }
}

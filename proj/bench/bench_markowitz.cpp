// Pivot-search kernels on random sparse matrices: the serial reference scan,
// the pruned scan, and the pruned scan split over OpenMP threads. Also times
// a full reduction with the reference and the pruned kernel.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <random>

#include "snfp/markowitz.hpp"
#include "snfp/reduce.hpp"

using namespace snfp;

namespace {

SparseMatrix random_matrix(Index m, Index n, unsigned per_col, std::uint64_t seed) {
  FieldSpec f(kDefaultPrime);
  SparseMatrix a(m, n, f);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> row(0, m - 1);
  std::uniform_int_distribution<FieldValue> val(1, f.p() - 1);
  for (Index j = 0; j < n; ++j) {
    std::vector<std::pair<Index, FieldValue>> col;
    for (unsigned k = 0; k < per_col; ++k) {
      const Index i = row(rng);
      bool dup = false;
      for (auto& e : col) dup = dup || e.first == i;
      if (!dup) col.emplace_back(i, val(rng));
    }
    a.set_column(j, SparseVector::from_pairs(std::move(col), f));
  }
  return a;
}

template <class F>
double seconds(F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Markowitz pivot-search benchmark"};
  Index m = 2000, n = 6000;
  unsigned per_col = 5;
  int threads = 4, reps = 20;
  app.add_option("-m,--rows", m, "rows");
  app.add_option("-n,--cols", n, "columns");
  app.add_option("--per-col", per_col, "nonzeros per column");
  app.add_option("--threads", threads, "threads for the parallel kernel");
  app.add_option("--reps", reps, "pivot searches per kernel");
  CLI11_PARSE(app, argc, argv);

  const SparseMatrix a = random_matrix(m, n, per_col, 42);
  std::printf("matrix %llux%llu, %zu nonzeros, OpenMP %s\n", static_cast<unsigned long long>(m),
              static_cast<unsigned long long>(n), a.nnz(), parallel_kernels_available() ? "on" : "off");

  std::optional<Pivot> ref, pruned, par;
  const double t_ref = seconds([&] {
    for (int r = 0; r < reps; ++r) ref = markowitz_pivot_reference(a, 0);
  });
  const double t_pruned = seconds([&] {
    for (int r = 0; r < reps; ++r) pruned = markowitz_pivot(a, 0, 1);
  });
  const double t_par = seconds([&] {
    for (int r = 0; r < reps; ++r) par = markowitz_pivot(a, 0, threads);
  });
  std::printf("pivot search x%d: reference %.4f s, pruned %.4f s, pruned/%d threads %.4f s, agree: %s\n", reps,
              t_ref, t_pruned, threads, t_par, ref == pruned && pruned == par ? "yes" : "NO");

  SparseMatrix d1 = a, d2 = a;
  SnfOptions slow, fast;
  slow.reference_pivot = true;
  Index rank_slow = 0, rank_fast = 0;
  const double t_slow = seconds([&] { rank_slow = snf(d1, slow).rank; });
  const double t_fast = seconds([&] { rank_fast = snf(d2, fast).rank; });
  std::printf("full reduction: reference %.3f s, pruned %.3f s, ranks %llu / %llu\n", t_slow, t_fast,
              static_cast<unsigned long long>(rank_slow), static_cast<unsigned long long>(rank_fast));
  return ref == pruned && pruned == par && rank_slow == rank_fast ? 0 : 1;
}

#pragma once

#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracle/dense.hpp"
#include "snfp/sparse.hpp"

namespace testing_support {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string& tag = "t") {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("snfp-test-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

inline snfp::SparseMatrix to_sparse(const oracle::Dense& d, std::size_t rows, std::size_t cols,
                                    snfp::FieldValue p) {
  snfp::FieldSpec f(p);
  snfp::SparseMatrix a(rows, cols, f);
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<std::pair<snfp::Index, snfp::FieldValue>> col;
    for (std::size_t i = 0; i < rows; ++i)
      if (d[i][j] != 0) col.emplace_back(i, static_cast<snfp::FieldValue>(d[i][j]));
    a.set_column(j, snfp::SparseVector::from_pairs(std::move(col), f));
  }
  return a;
}

inline oracle::Dense to_dense(const snfp::SparseMatrix& a) {
  oracle::Dense d = oracle::zeros(a.rows(), a.cols());
  auto v = a.to_dense();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d[i][j] = v[i][j];
  return d;
}

}  // namespace testing_support

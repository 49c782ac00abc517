#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "doctest.h"
#include "spillover/error.hpp"

// Evaluates `expr` and checks that it throws spillover::Error carrying `errc`.
#define CHECK_ERRC(expr, errc)                                          \
  do {                                                                  \
    bool thrown_ = false;                                               \
    try {                                                               \
      (void)(expr);                                                     \
    } catch (const spillover::Error& e_) {                              \
      thrown_ = true;                                                   \
      CHECK_MESSAGE(e_.code() == (errc), "got: " << e_.what());         \
    }                                                                   \
    CHECK_MESSAGE(thrown_, "expected spillover::Error from " #expr);    \
  } while (0)

namespace testing {

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("spillover_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline Eigen::MatrixXd randn(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = z(rng);
  return m;
}

}  // namespace testing

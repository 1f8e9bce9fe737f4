#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <random>
#include <string>

#include "error.hpp"
#include "linalg.hpp"

namespace testutil {

using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

inline periods::Mat mat(int rows, int cols, std::initializer_list<double> entries) {
  periods::Mat m(rows, cols);
  auto it = entries.begin();
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = *it++;
  }
  return m;
}

inline periods::Mat diag(std::initializer_list<double> entries) {
  const int d = static_cast<int>(entries.size());
  periods::Mat m = periods::Mat::Zero(d, d);
  int i = 0;
  for (double x : entries) {
    m(i, i) = x;
    ++i;
  }
  return m;
}

inline periods::Mat rotation(double angle) {
  return mat(2, 2, {std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle)});
}

inline LMat widen(const periods::Mat& m) { return m.cast<long double>(); }

inline periods::Mat gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  periods::Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("periods_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

template <typename F>
periods::ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const periods::Error& e) {
    return e.code();
  }
  return static_cast<periods::ErrorCode>(0);
}

}  // namespace testutil

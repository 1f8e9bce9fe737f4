#include "linalg.hpp"

#include <cmath>

#include "error.hpp"

namespace periods {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

std::vector<std::vector<int>> k_subsets(int d, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > d) return out;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(idx);
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == d - k + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

namespace {

double minor_det(const Mat& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  const auto k = static_cast<Eigen::Index>(rows.size());
  if (k == 0) return 1.0;
  Eigen::MatrixXd sub(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = m(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
  }
  if (k == 1) return sub(0, 0);
  return sub.partialPivLu().determinant();
}

}  // namespace

Mat exterior_matrix(const Mat& m, int k) {
  const int d = static_cast<int>(m.rows());
  if (m.rows() != m.cols()) fail(ErrorCode::invalid_input, "exterior power needs a square matrix");
  if (k < 1 || k > d) {
    fail(ErrorCode::invalid_input, "exterior power degree " + std::to_string(k) + " outside 1.." + std::to_string(d));
  }
  const auto subsets = k_subsets(d, k);
  const auto n = static_cast<Eigen::Index>(subsets.size());
  Mat out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = minor_det(m, subsets[static_cast<std::size_t>(i)], subsets[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

Vec wedge(const Mat& frame) {
  const int d = static_cast<int>(frame.rows());
  const int k = static_cast<int>(frame.cols());
  const auto subsets = k_subsets(d, k);
  std::vector<int> all_cols(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) all_cols[static_cast<std::size_t>(j)] = j;
  Vec out(static_cast<Eigen::Index>(subsets.size()));
  for (std::size_t i = 0; i < subsets.size(); ++i) out(static_cast<Eigen::Index>(i)) = minor_det(frame, subsets[i], all_cols);
  return out;
}

double log_frame_volume(const Mat& frame) {
  if (frame.cols() == 0) return 0.0;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(frame);
  const auto& packed = qr.matrixQR();
  double log_vol = 0.0;
  for (Eigen::Index i = 0; i < frame.cols(); ++i) log_vol += std::log(std::abs(packed(i, i)));
  return log_vol;
}

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace periods

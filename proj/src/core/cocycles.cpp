#include "cocycles.hpp"

#include <cmath>

#include "error.hpp"

namespace periods {

namespace {

// A frame is degenerate when its volume is negligible against the product
// of its column norms.
void require_independent(const Mat& frame, const char* what) {
  const double log_vol = log_frame_volume(frame);
  double log_cols = 0.0;
  for (Eigen::Index j = 0; j < frame.cols(); ++j) log_cols += std::log(frame.col(j).norm());
  if (!std::isfinite(log_vol) || !std::isfinite(log_cols) || log_vol - log_cols < std::log(1e-12)) {
    fail(ErrorCode::invalid_input, std::string(what) + ": degenerate frame");
  }
}

ScaledMatrix numeric_inverse(const ScaledMatrix& g) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu{Eigen::MatrixXd(g.unit())};
  return ScaledMatrix(Mat(lu.inverse()), -g.log_scale());
}

}  // namespace

double busemann_weight(const ScaledMatrix& g, const Mat& frame) {
  if (frame.rows() != g.dim() || frame.cols() < 1 || frame.cols() > g.dim()) {
    fail(ErrorCode::invalid_input, "busemann_weight: frame shape does not match the matrix");
  }
  require_independent(frame, "busemann_weight");
  const auto k = static_cast<double>(frame.cols());
  return log_frame_volume(g.unit() * frame) - log_frame_volume(frame) + k * g.log_scale();
}

double busemann_weight_kvector(const ScaledMatrix& lifted, const Vec& omega) {
  const double n = omega.norm();
  if (!(n > 0.0)) fail(ErrorCode::invalid_input, "busemann_weight: zero k-vector");
  return std::log((lifted.unit() * omega).norm() / n) + lifted.log_scale();
}

double cocycle_identity_residual(const ScaledMatrix& g, const ScaledMatrix& h, const Mat& frame) {
  const Mat h_frame = h.unit() * frame;
  require_independent(h_frame, "cocycle_identity_residual (image frame)");
  // B(g, hF) uses hF as a frame; its scale cancels in the ratio.
  return std::abs(busemann_weight(g * h, frame) - busemann_weight(g, h_frame) - busemann_weight(h, frame));
}

double gromov_cocycle_residual(const ScaledMatrix& g, const ScaledMatrix& g_inv, const Mat& coframe,
                               const Mat& frame) {
  const Mat moved_frame = g.unit() * frame;
  // theta o g^-1 as a column vector is g^-T theta.
  const Mat moved_coframe = g_inv.unit().transpose() * coframe;
  const auto k = static_cast<double>(frame.cols());
  const double before = gromov_weight(coframe, frame);
  const double after = gromov_weight(moved_coframe, moved_frame);
  const double covector_stretch = log_frame_volume(moved_coframe) + k * g_inv.log_scale() - log_frame_volume(coframe);
  const double vector_stretch = log_frame_volume(moved_frame) + k * g.log_scale() - log_frame_volume(frame);
  return std::abs(after - before + covector_stretch + vector_stretch);
}

double gromov_cocycle_residual(const ScaledMatrix& g, const Mat& coframe, const Mat& frame) {
  return gromov_cocycle_residual(g, numeric_inverse(g), coframe, frame);
}

double period_identity_residual(const ScaledMatrix& g, int k, double gap_tol) {
  const int d = g.dim();
  if (k < 1 || k > d) fail(ErrorCode::invalid_input, "period identity level must be in 1..d");
  const auto jordan = jordan_projection(g);
  double chi = 0.0;
  for (int i = 0; i < k; ++i) chi += jordan[static_cast<std::size_t>(i)];
  if (k == d) return std::abs(busemann_weight(g, Mat::Identity(d, d)) - chi);
  for (int level = 1; level <= k; ++level) {
    if (!(jordan[static_cast<std::size_t>(level - 1)] - jordan[static_cast<std::size_t>(level)] > gap_tol)) {
      fail(ErrorCode::not_proximal, "period identity: no eigen-gap at level " + std::to_string(level));
    }
  }
  const auto frames = attracting_frames(g, k, gap_tol);
  return std::abs(busemann_weight(g, frames.frame) - chi);
}

double period_identity_residual(const WeightTower& tower, std::span<const Letter> letters, int k, double gap_tol) {
  const int d = tower.dim();
  if (k < 1 || k > d) fail(ErrorCode::invalid_input, "period identity level must be in 1..d");
  const auto rec = spectral_record(tower, letters, gap_tol);
  double chi = 0.0;
  for (int i = 0; i < k; ++i) chi += rec.jordan[static_cast<std::size_t>(i)];
  if (k == d) return std::abs(tower.log_abs_det(letters) - chi);
  for (int level = 1; level <= k; ++level) {
    if (!(rec.level_gap(level) > gap_tol)) {
      fail(ErrorCode::not_proximal, "period identity: no eigen-gap at level " + std::to_string(level));
    }
  }
  const ScaledMatrix lifted = evaluate(tower.level(k), letters);
  const auto data = attracting_data(lifted, gap_tol);
  return std::abs(busemann_weight_kvector(lifted, data.vec) - chi);
}

BoundaryPoint fixed_point_flags(const ScaledMatrix& g, const std::vector<int>& levels, double gap_tol) {
  BoundaryPoint out;
  for (int k : levels) {
    auto frames = attracting_frames(g, k, gap_tol);
    out.levels.push_back(k);
    out.frames.push_back(std::move(frames.frame));
    out.coframes.push_back(std::move(frames.coframe));
  }
  return out;
}

double class_gromov(const SpectralRecord& record, const Functional& phi) {
  if (static_cast<std::size_t>(phi.dim()) != record.jordan.size()) {
    fail(ErrorCode::invalid_input, "functional '" + phi.name() + "' does not match the record dimension");
  }
  std::vector<double> weights(record.gromov.size(), 0.0);
  for (std::size_t k = 1; k <= record.gromov.size(); ++k) {
    if (!phi.touches(static_cast<int>(k))) continue;
    if (!record.gromov[k - 1]) {
      fail(ErrorCode::not_proximal, "class is not proximal at level " + std::to_string(k) + " used by '" +
                                        phi.name() + "'");
    }
    weights[k - 1] = *record.gromov[k - 1];
  }
  return phi.on_weights(weights);
}

double class_gromov(const WeightTower& tower, const CyclicWord& cls, const Functional& phi, double gap_tol) {
  return class_gromov(spectral_record(tower, cls.letters(), gap_tol), phi);
}

}  // namespace periods

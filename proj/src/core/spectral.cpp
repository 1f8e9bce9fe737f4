#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <sstream>

#include "error.hpp"

namespace periods {

namespace {

using Complex = std::complex<double>;

struct SortedEigen {
  std::vector<Complex> values;  // descending modulus
  Eigen::MatrixXcd vectors;     // columns follow `values`
};

SortedEigen sorted_eigen(const Mat& m, bool with_vectors) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(m), with_vectors);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::numeric, "eigenvalue iteration did not converge for a " + std::to_string(m.rows()) + "x" +
                                 std::to_string(m.cols()) + " matrix");
  }
  const auto& vals = solver.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(vals.size()));
  for (Eigen::Index i = 0; i < vals.size(); ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return std::abs(vals(a)) > std::abs(vals(b)); });
  SortedEigen out;
  for (auto i : order) out.values.push_back(vals(i));
  if (with_vectors) {
    const auto vecs = solver.eigenvectors();
    out.vectors.resize(vecs.rows(), vecs.cols());
    for (std::size_t j = 0; j < order.size(); ++j) out.vectors.col(static_cast<Eigen::Index>(j)) = vecs.col(order[j]);
  }
  return out;
}

Eigen::VectorXd singular_values(const Mat& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(m)};
  return svd.singularValues();
}

void require_conditioned(const ScaledMatrix& m, const char* what) {
  if (!m.unit().allFinite()) fail(ErrorCode::numeric, std::string(what) + ": non-finite entries");
  const auto sv = singular_values(m.unit());
  const double smin = sv(sv.size() - 1);
  const double cond = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  if (!(cond <= kMaxConditionNumber)) {
    std::ostringstream os;
    os.precision(3);
    os << what << ": condition number " << cond << " of the " << m.dim() << "x" << m.dim()
       << " unit matrix exceeds " << kMaxConditionNumber << " (log scale " << m.log_scale()
       << "); use the exterior-power tower route";
    fail(ErrorCode::numeric, os.str());
  }
}

void normalize_sign(Vec& v) {
  const double scale = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12 * scale) {
      if (v(i) < 0) v = -v;
      return;
    }
  }
}

double log_gap(const std::vector<Complex>& values, std::size_t k) {
  // log|mu_k| - log|mu_{k+1}|, 1-based k.
  const double top = std::abs(values[k - 1]);
  const double next = std::abs(values[k]);
  if (next == 0.0) return std::numeric_limits<double>::infinity();
  return std::log(top) - std::log(next);
}

Vec top_real_vector(const SortedEigen& eig) {
  Vec v = eig.vectors.col(0).real();
  const double n = v.norm();
  if (!(n > 0.0)) fail(ErrorCode::numeric, "degenerate top eigenvector");
  v /= n;
  normalize_sign(v);
  return v;
}

Mat invariant_basis(const SortedEigen& eig, int k) {
  const auto d = eig.vectors.rows();
  Mat basis(d, k);
  int filled = 0;
  for (int i = 0; i < k; ++i) {
    const Complex mu = eig.values[static_cast<std::size_t>(i)];
    const double tiny = 1e-12 * std::abs(mu);
    if (std::abs(mu.imag()) <= tiny) {
      if (filled >= k) break;
      basis.col(filled++) = eig.vectors.col(i).real();
    } else if (mu.imag() > 0) {
      if (filled + 2 > k) break;
      basis.col(filled++) = eig.vectors.col(i).real();
      basis.col(filled++) = eig.vectors.col(i).imag();
    }
  }
  if (filled != k) fail(ErrorCode::numeric, "could not assemble a real basis of the top invariant subspace");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr{Eigen::MatrixXd(basis)};
  Mat q = Eigen::MatrixXd(qr.householderQ()).leftCols(k);
  return q;
}

}  // namespace

std::vector<double> weight_components(std::span<const double> projection) {
  std::vector<double> out;
  out.reserve(projection.size());
  double acc = 0.0;
  for (double x : projection) out.push_back(acc += x);
  return out;
}

std::vector<double> jordan_projection(const ScaledMatrix& m) {
  require_conditioned(m, "jordan_projection");
  const auto eig = sorted_eigen(m.unit(), false);
  std::vector<double> out;
  for (const auto& mu : eig.values) out.push_back(std::log(std::abs(mu)) + m.log_scale());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::vector<double> cartan_projection(const ScaledMatrix& m) {
  require_conditioned(m, "cartan_projection");
  const auto sv = singular_values(m.unit());
  std::vector<double> out;
  for (Eigen::Index i = 0; i < sv.size(); ++i) out.push_back(std::log(sv(i)) + m.log_scale());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double log_spectral_radius(const ScaledMatrix& m) {
  const auto eig = sorted_eigen(m.unit(), false);
  return std::log(std::abs(eig.values.front())) + m.log_scale();
}

double log_operator_norm(const ScaledMatrix& m) { return std::log(singular_values(m.unit())(0)) + m.log_scale(); }

AttractingData attracting_data(const ScaledMatrix& m, double gap_tol) {
  const auto right = sorted_eigen(m.unit(), true);
  const double gap = right.values.size() < 2 ? std::numeric_limits<double>::infinity() : log_gap(right.values, 1);
  if (!(gap > gap_tol)) {
    std::ostringstream os;
    os << "not proximal: top eigen-gap " << gap << " <= tolerance " << gap_tol;
    fail(ErrorCode::not_proximal, os.str());
  }
  const auto left = sorted_eigen(m.unit().transpose(), true);
  return {top_real_vector(right), top_real_vector(left)};
}

double gromov_pair(const Vec& theta, const Vec& v) {
  const double nt = theta.norm();
  const double nv = v.norm();
  if (!(nt > 0.0) || !(nv > 0.0)) fail(ErrorCode::invalid_input, "gromov_pair needs nonzero arguments");
  const double ratio = std::abs(theta.dot(v)) / (nt * nv);
  if (!(ratio > 16.0 * std::numeric_limits<double>::epsilon())) {
    fail(ErrorCode::transversality, "covector and vector are not transverse (theta(v) = 0)");
  }
  return std::log(std::min(ratio, 1.0));
}

double gromov_weight(const Mat& coframe, const Mat& frame) {
  if (coframe.rows() != frame.rows() || coframe.cols() != frame.cols() || frame.cols() < 1) {
    fail(ErrorCode::invalid_input, "gromov_weight needs a k-coframe and a k-frame of equal shape");
  }
  const double log_vt = log_frame_volume(coframe);
  const double log_vv = log_frame_volume(frame);
  if (!std::isfinite(log_vt) || !std::isfinite(log_vv)) {
    fail(ErrorCode::transversality, "degenerate frame in gromov_weight");
  }
  const Eigen::MatrixXd pairing = Eigen::MatrixXd(coframe.transpose() * frame);
  const double det = pairing.rows() == 1 ? pairing(0, 0) : pairing.partialPivLu().determinant();
  const double log_ratio = std::log(std::abs(det)) - log_vt - log_vv;
  if (!(log_ratio > std::log(16.0 * std::numeric_limits<double>::epsilon()))) {
    fail(ErrorCode::transversality, "k-coframe and k-frame are not transverse");
  }
  return std::min(log_ratio, 0.0);
}

FlagFrames attracting_frames(const ScaledMatrix& m, int k, double gap_tol) {
  const int d = m.dim();
  if (k < 1 || k >= d) fail(ErrorCode::invalid_input, "frame level must be in 1..d-1");
  const auto right = sorted_eigen(m.unit(), true);
  const double gap = log_gap(right.values, static_cast<std::size_t>(k));
  if (!(gap > gap_tol)) {
    std::ostringstream os;
    os << "not proximal at level " << k << ": eigen-gap " << gap << " <= tolerance " << gap_tol;
    fail(ErrorCode::not_proximal, os.str());
  }
  const auto left = sorted_eigen(m.unit().transpose(), true);
  return {invariant_basis(right, k), invariant_basis(left, k)};
}

const char* proximality_method_name(ProximalityMethod m) {
  return m == ProximalityMethod::eigen_gap ? "eigen-gap" : "sampled-contraction";
}

const char* proximality_clause_name(ProximalityClause c) {
  switch (c) {
    case ProximalityClause::none: return "none";
    case ProximalityClause::gap: return "gap";
    case ProximalityClause::transversality: return "transversality";
    case ProximalityClause::contraction: return "contraction";
  }
  return "?";
}

ProximalityCert proximality_cert(const ScaledMatrix& m, double r, double eps, int n_samples, double gap_tol) {
  if (!(r > 0.0) || !(eps > 0.0)) fail(ErrorCode::invalid_input, "proximality_cert needs r > 0 and eps > 0");
  ProximalityCert cert;
  AttractingData data;
  try {
    data = attracting_data(m, gap_tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::not_proximal) throw;
    cert.r_value = std::numeric_limits<double>::infinity();
    cert.eps_estimate = 1.0;
    cert.failing_clause = ProximalityClause::gap;
    return cert;
  }
  const Vec& v = data.vec;
  const Vec& theta = data.covec;
  const double transversality = std::abs(theta.dot(v));
  cert.r_value = transversality > 0.0 ? 1.0 / transversality : std::numeric_limits<double>::infinity();
  const bool transverse_ok = cert.r_value <= r;

  const int d = m.dim();
  const Mat& g = m.unit();
  // Orthonormal basis of ker(theta), the repelling hyperplane.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr{Eigen::MatrixXd(theta)};
  const Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd hyper = q.rightCols(d - 1);

  auto distance_to_attractor = [&](const Vec& x) {
    const Vec gx = g * x;
    const double n = gx.norm();
    if (!(n > 0.0)) return 1.0;
    const double c = std::min(1.0, std::abs(gx.dot(v)) / n);
    return std::sqrt(std::max(0.0, 1.0 - c * c));
  };

  auto finish = [&](double estimate, ProximalityMethod method) {
    cert.eps_estimate = estimate;
    cert.method = method;
    cert.contraction_ok = estimate <= eps;
    cert.is_proximal = transverse_ok && cert.contraction_ok;
    if (!transverse_ok) {
      cert.failing_clause = ProximalityClause::transversality;
    } else if (!cert.contraction_ok) {
      cert.failing_clause = ProximalityClause::contraction;
    }
    return cert;
  };

  if (eps >= 1.0) return finish(0.0, ProximalityMethod::eigen_gap);

  // Sufficient condition: with x = alpha v + h (h in the hyperplane) and
  // |theta(x)| >= eps, dist(gx, v) <= s(1 + 1/tau) / (|mu| eps / tau - s(1 + 1/tau)),
  // tau = |theta(v)|, s = |g restricted to the hyperplane|.
  const double mu = (g * v).norm();
  const double s = singular_values(Mat(g * hyper))(0);
  const double spill = s * (1.0 + 1.0 / transversality);
  const double denom = mu * eps / transversality - spill;
  if (denom > 0.0 && spill / denom <= eps) return finish(spill / denom, ProximalityMethod::eigen_gap);

  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(eps, 1.0);
  double worst = 0.0;
  for (int i = 0; i < std::max(n_samples, 2); ++i) {
    // Half of the points sit on the boundary shell |theta(x)| = eps, where
    // contraction is weakest; the rest fill the admissible region.
    const double c = (i % 2 == 0) ? eps : uniform(rng);
    Eigen::VectorXd coeffs(d - 1);
    for (int j = 0; j < d - 1; ++j) coeffs(j) = normal(rng);
    Vec u = hyper * coeffs;
    const double un = u.norm();
    if (un > 0.0) u /= un;
    const double sign = (i % 4 < 2) ? 1.0 : -1.0;
    const Vec x = sign * c * theta + std::sqrt(1.0 - c * c) * u;
    worst = std::max(worst, distance_to_attractor(x));
  }
  return finish(worst, ProximalityMethod::sampled_contraction);
}

double benoist_defect(const ScaledMatrix& m, int k, double gap_tol) {
  if (k < 1 || k >= m.dim()) fail(ErrorCode::invalid_input, "benoist_defect level must be in 1..d-1");
  const ScaledMatrix lifted = k == 1 ? m : exterior_power(m, k);
  const auto eig = sorted_eigen(lifted.unit(), false);
  const double gap = log_gap(eig.values, 1);
  if (!(gap > gap_tol)) {
    std::ostringstream os;
    os << "not proximal at level " << k << ": eigen-gap " << gap;
    fail(ErrorCode::not_proximal, os.str());
  }
  const double cartan_k = log_operator_norm(lifted);
  const double jordan_k = std::log(std::abs(eig.values.front())) + lifted.log_scale();
  const auto data = attracting_data(lifted, gap_tol);
  return cartan_k - jordan_k + gromov_pair(data.covec, data.vec);
}

SpectralRecord spectral_record(const ScaledMatrix& m, double gap_tol) {
  SpectralRecord rec;
  rec.jordan = jordan_projection(m);
  rec.cartan = cartan_projection(m);
  const int d = m.dim();
  rec.prox_gap = rec.jordan[0] - rec.jordan[1];
  rec.gromov.assign(static_cast<std::size_t>(d - 1), std::nullopt);
  if (rec.prox_gap > gap_tol) {
    auto data = attracting_data(m, gap_tol);
    rec.attract_vec = std::move(data.vec);
    rec.attract_covec = std::move(data.covec);
  }
  for (int k = 1; k < d; ++k) {
    if (!(rec.level_gap(k) > gap_tol)) continue;
    const auto frames = attracting_frames(m, k, gap_tol);
    rec.gromov[static_cast<std::size_t>(k - 1)] = gromov_weight(frames.coframe, frames.frame);
  }
  return rec;
}

WeightTower::WeightTower(GroupRep rep) {
  const int d = rep.dim();
  levels_.push_back(std::move(rep));
  for (int k = 2; k < d; ++k) levels_.push_back(exterior_rep(levels_.front(), k));
}

double WeightTower::log_abs_det(std::span<const Letter> letters) const {
  double acc = 0.0;
  for (Letter l : letters) acc += base().log_abs_det(l);
  return acc;
}

SpectralRecord spectral_record(const WeightTower& tower, std::span<const Letter> letters, double gap_tol) {
  const int d = tower.dim();
  std::vector<double> chi_jordan(static_cast<std::size_t>(d + 1), 0.0);
  std::vector<double> chi_cartan(static_cast<std::size_t>(d + 1), 0.0);
  std::vector<SortedEigen> right(static_cast<std::size_t>(d));
  std::vector<ScaledMatrix> lifted;
  lifted.reserve(static_cast<std::size_t>(d));
  for (int k = 1; k < d; ++k) {
    lifted.push_back(evaluate(tower.level(k), letters));
    const auto& mk = lifted.back();
    right[static_cast<std::size_t>(k)] = sorted_eigen(mk.unit(), true);
    const double top = std::abs(right[static_cast<std::size_t>(k)].values.front());
    if (!(top > 0.0)) fail(ErrorCode::numeric, "zero spectral radius in exterior power " + std::to_string(k));
    chi_jordan[static_cast<std::size_t>(k)] = std::log(top) + mk.log_scale();
    chi_cartan[static_cast<std::size_t>(k)] = std::log(singular_values(mk.unit())(0)) + mk.log_scale();
  }
  const double log_det = tower.log_abs_det(letters);
  chi_jordan[static_cast<std::size_t>(d)] = log_det;
  chi_cartan[static_cast<std::size_t>(d)] = log_det;

  SpectralRecord rec;
  for (int i = 1; i <= d; ++i) {
    rec.jordan.push_back(chi_jordan[static_cast<std::size_t>(i)] - chi_jordan[static_cast<std::size_t>(i - 1)]);
    rec.cartan.push_back(chi_cartan[static_cast<std::size_t>(i)] - chi_cartan[static_cast<std::size_t>(i - 1)]);
  }
  rec.prox_gap = rec.jordan[0] - rec.jordan[1];
  rec.gromov.assign(static_cast<std::size_t>(d - 1), std::nullopt);
  for (int k = 1; k < d; ++k) {
    if (!(rec.level_gap(k) > gap_tol)) continue;
    const auto& mk = lifted[static_cast<std::size_t>(k - 1)];
    const Vec vec = top_real_vector(right[static_cast<std::size_t>(k)]);
    const Vec covec = top_real_vector(sorted_eigen(mk.unit().transpose(), true));
    rec.gromov[static_cast<std::size_t>(k - 1)] = gromov_pair(covec, vec);
    if (k == 1) {
      rec.attract_vec = vec;
      rec.attract_covec = covec;
    }
  }
  return rec;
}

double weyl_violation(const SpectralRecord& record) {
  const auto chi_l = weight_components(record.jordan);
  const auto chi_a = weight_components(record.cartan);
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < chi_l.size(); ++k) worst = std::max(worst, chi_l[k] - chi_a[k]);
  return worst;
}

double determinant_sum_residual(const SpectralRecord& record, double log_abs_det) {
  const auto chi_l = weight_components(record.jordan);
  const auto chi_a = weight_components(record.cartan);
  return std::max(std::abs(chi_l.back() - log_abs_det), std::abs(chi_a.back() - log_abs_det));
}

}  // namespace periods

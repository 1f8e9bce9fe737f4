#include "representations.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "error.hpp"

namespace periods {

ScaledMatrix::ScaledMatrix(const Mat& m, double log_scale) : unit_(m), log_scale_(log_scale) { renormalize(); }

ScaledMatrix ScaledMatrix::identity(int d) { return ScaledMatrix(Mat::Identity(d, d)); }

void ScaledMatrix::renormalize() {
  if (!unit_.allFinite() || !std::isfinite(log_scale_)) {
    fail(ErrorCode::numeric, "non-finite entries in matrix product");
  }
  const double m = max_abs(unit_);
  if (m == 0.0) fail(ErrorCode::numeric, "matrix product collapsed to zero");
  unit_ /= m;
  log_scale_ += std::log(m);
}

Mat ScaledMatrix::dense() const { return unit_ * std::exp(log_scale_); }

ScaledMatrix ScaledMatrix::operator*(const ScaledMatrix& rhs) const {
  return ScaledMatrix(unit_ * rhs.unit_, log_scale_ + rhs.log_scale_);
}

ScaledMatrix ScaledMatrix::power(int n) const {
  if (n < 0) fail(ErrorCode::invalid_input, "negative matrix power");
  ScaledMatrix result = identity(dim());
  ScaledMatrix base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

ScaledMatrix ScaledMatrix::transpose() const { return ScaledMatrix(unit_.transpose(), log_scale_); }

namespace {

constexpr double kInverseTolerance = 1e-10;
constexpr double kRoundingFloor = 64.0 * std::numeric_limits<double>::epsilon();

void check_generator(const Mat& g, const Mat& g_inv, double det_tolerance, int index) {
  const int d = static_cast<int>(g.rows());
  const std::string name = "generator " + std::to_string(index);
  if (g.rows() != g.cols() || g_inv.rows() != g.rows() || g_inv.cols() != g.cols()) {
    fail(ErrorCode::invalid_config, name + ": matrix or inverse has the wrong shape");
  }
  if (!g.allFinite() || !g_inv.allFinite()) fail(ErrorCode::invalid_config, name + ": non-finite entries");
  const double kappa = max_abs(g) * max_abs(g_inv) * d;
  const double floor = kRoundingFloor * kappa * d;
  const double det = Eigen::MatrixXd(g).partialPivLu().determinant();
  if (std::abs(std::abs(det) - 1.0) > std::max(det_tolerance, floor)) {
    std::ostringstream os;
    os.precision(17);
    os << name << ": |det| = " << std::abs(det) << " is not 1 within tolerance " << std::max(det_tolerance, floor);
    fail(ErrorCode::invalid_config, os.str());
  }
  const double residual = max_abs(g_inv * g - Mat::Identity(d, d));
  if (residual > std::max(kInverseTolerance, floor)) {
    std::ostringstream os;
    os << name << ": stored inverse is off by " << residual;
    fail(ErrorCode::invalid_config, os.str());
  }
}

}  // namespace

GroupRep::GroupRep(int rank, std::vector<Mat> gens, std::vector<Mat> inverses, std::string label,
                   double det_tolerance)
    : alphabet_(rank), label_(std::move(label)), det_tolerance_(det_tolerance) {
  if (static_cast<int>(gens.size()) != rank || inverses.size() != gens.size()) {
    fail(ErrorCode::invalid_config, "representation needs one matrix and one inverse per generator");
  }
  if (!(det_tolerance > 0.0)) fail(ErrorCode::invalid_config, "det_tolerance must be positive");
  dim_ = static_cast<int>(gens[0].rows());
  if (dim_ < 2) fail(ErrorCode::invalid_config, "representation dimension must be at least 2");
  by_key_.resize(static_cast<std::size_t>(2 * rank));
  log_det_.resize(by_key_.size());
  for (int i = 0; i < rank; ++i) {
    if (gens[static_cast<std::size_t>(i)].rows() != dim_) {
      fail(ErrorCode::invalid_config, "generator " + std::to_string(i + 1) + " has a different dimension");
    }
    check_generator(gens[static_cast<std::size_t>(i)], inverses[static_cast<std::size_t>(i)], det_tolerance, i + 1);
    const Letter l = i + 1;
    const auto k_pos = static_cast<std::size_t>(Alphabet::order_key(l));
    const auto k_neg = static_cast<std::size_t>(Alphabet::order_key(-l));
    by_key_[k_pos] = std::move(gens[static_cast<std::size_t>(i)]);
    by_key_[k_neg] = std::move(inverses[static_cast<std::size_t>(i)]);
    const double log_det = std::log(std::abs(Eigen::MatrixXd(by_key_[k_pos]).partialPivLu().determinant()));
    log_det_[k_pos] = log_det;
    log_det_[k_neg] = -log_det;
  }
}

ScaledMatrix evaluate(const GroupRep& rep, std::span<const Letter> letters) {
  ScaledMatrix acc = ScaledMatrix::identity(rep.dim());
  for (Letter l : letters) {
    if (!rep.alphabet().contains(l)) {
      fail(ErrorCode::invalid_input, "letter " + std::to_string(l) + " is outside the representation's alphabet");
    }
    acc = acc * ScaledMatrix(rep.generator(l));
  }
  return acc;
}

GroupRep schottky_sl2(double multiplier, double angle) {
  if (!(multiplier > 1.0) || !std::isfinite(multiplier)) {
    fail(ErrorCode::invalid_config, "schottky_sl2 multiplier must be > 1");
  }
  if (!std::isfinite(angle) || std::abs(std::sin(angle)) < 1e-12) {
    fail(ErrorCode::invalid_config, "schottky_sl2 angle must not be a multiple of pi");
  }
  Mat diag = Mat::Zero(2, 2);
  diag(0, 0) = multiplier;
  diag(1, 1) = 1.0 / multiplier;
  Mat diag_inv = Mat::Zero(2, 2);
  diag_inv(0, 0) = 1.0 / multiplier;
  diag_inv(1, 1) = multiplier;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat rot(2, 2);
  rot << c, -s, s, c;
  const Mat b = rot * diag * rot.transpose();
  const Mat b_inv = rot * diag_inv * rot.transpose();
  std::ostringstream label;
  label.precision(17);
  label << "schottky_sl2(multiplier=" << multiplier << ",angle=" << angle << ")";
  return GroupRep(2, {diag, b}, {diag_inv, b_inv}, label.str());
}

Mat sym_power_matrix(const Mat& g, int k) {
  if (g.rows() != 2 || g.cols() != 2) fail(ErrorCode::invalid_input, "sym_power needs a 2x2 matrix");
  if (k < 1 || k > kMaxSymPower) {
    fail(ErrorCode::invalid_config, "sym_power degree must be in 1.." + std::to_string(kMaxSymPower));
  }
  // Column j: coefficients of (g00 x + g10 y)^(k-j) (g01 x + g11 y)^j.
  auto poly_pow = [](double p, double q, int n) {
    std::vector<double> out{1.0};
    for (int i = 0; i < n; ++i) {
      std::vector<double> next(out.size() + 1, 0.0);
      for (std::size_t t = 0; t < out.size(); ++t) {
        next[t] += out[t] * p;
        next[t + 1] += out[t] * q;
      }
      out = std::move(next);
    }
    return out;
  };
  Mat out = Mat::Zero(k + 1, k + 1);
  for (int j = 0; j <= k; ++j) {
    const auto left = poly_pow(g(0, 0), g(1, 0), k - j);
    const auto right = poly_pow(g(0, 1), g(1, 1), j);
    for (std::size_t s = 0; s < left.size(); ++s) {
      for (std::size_t t = 0; t < right.size(); ++t) out(static_cast<Eigen::Index>(s + t), j) += left[s] * right[t];
    }
  }
  return out;
}

GroupRep sym_power(const GroupRep& rep2, int k) {
  if (rep2.dim() != 2) fail(ErrorCode::invalid_config, "sym_power needs a 2-dimensional representation");
  if (k < 1 || k > kMaxSymPower) {
    fail(ErrorCode::invalid_config, "sym_power degree must be in 1.." + std::to_string(kMaxSymPower));
  }
  std::vector<Mat> gens;
  std::vector<Mat> inverses;
  for (int i = 1; i <= rep2.alphabet().rank(); ++i) {
    gens.push_back(sym_power_matrix(rep2.generator(i), k));
    inverses.push_back(sym_power_matrix(rep2.generator(-i), k));
  }
  return GroupRep(rep2.alphabet().rank(), std::move(gens), std::move(inverses),
                  "sym_power(" + rep2.label() + ",k=" + std::to_string(k) + ")", rep2.det_tolerance());
}

ScaledMatrix exterior_power(const ScaledMatrix& m, int k) {
  if (k < 1 || k > m.dim()) {
    fail(ErrorCode::invalid_input, "exterior power degree " + std::to_string(k) + " outside 1.." +
                                       std::to_string(m.dim()));
  }
  return ScaledMatrix(exterior_matrix(m.unit(), k), k * m.log_scale());
}

GroupRep exterior_rep(const GroupRep& rep, int k) {
  std::vector<Mat> gens;
  std::vector<Mat> inverses;
  for (int i = 1; i <= rep.alphabet().rank(); ++i) {
    gens.push_back(exterior_matrix(rep.generator(i), k));
    inverses.push_back(exterior_matrix(rep.generator(-i), k));
  }
  const int dim = static_cast<int>(gens[0].rows());
  if (dim < 2) fail(ErrorCode::invalid_input, "exterior power of degree d is one-dimensional");
  // Minors of k x k blocks carry k times the relative rounding of the entries.
  return GroupRep(rep.alphabet().rank(), std::move(gens), std::move(inverses),
                  "exterior(" + rep.label() + ",k=" + std::to_string(k) + ")", rep.det_tolerance() * k * dim);
}

namespace {

Mat matrix_from_list(const nlohmann::json& list, int dim, const std::string& what) {
  if (!list.is_array() || static_cast<int>(list.size()) != dim * dim) {
    fail(ErrorCode::invalid_config, what + " must be a list of " + std::to_string(dim * dim) + " numbers");
  }
  Mat m(dim, dim);
  for (int i = 0; i < dim * dim; ++i) {
    const auto& entry = list[static_cast<std::size_t>(i)];
    if (!entry.is_number()) fail(ErrorCode::invalid_config, what + " has a non-numeric entry");
    m(i / dim, i % dim) = entry.get<double>();
  }
  return m;
}

}  // namespace

GroupRep parse_representation(const std::string& text, const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::invalid_config, origin + ": " + e.what());
  }
  auto require = [&](const char* key) -> const nlohmann::json& {
    if (!doc.contains(key)) fail(ErrorCode::invalid_config, origin + ": missing key '" + key + "'");
    return doc.at(key);
  };
  const auto& dim_node = require("dim");
  if (!dim_node.is_number_integer() || dim_node.get<int>() < 2) {
    fail(ErrorCode::invalid_config, origin + ": 'dim' must be an integer >= 2");
  }
  const int dim = dim_node.get<int>();
  const std::string label = doc.value("label", origin);
  const double det_tol = doc.value("det_tolerance", GroupRep::kDefaultDetTolerance);
  const auto& gens_node = require("generators");
  if (!gens_node.is_array() || gens_node.empty()) {
    fail(ErrorCode::invalid_config, origin + ": 'generators' must be a nonempty list");
  }
  std::vector<Mat> gens;
  std::vector<Mat> inverses;
  for (std::size_t i = 0; i < gens_node.size(); ++i) {
    const auto& g = gens_node[i];
    const std::string what = origin + ": generator " + std::to_string(i + 1);
    if (!g.is_object() || !g.contains("matrix")) fail(ErrorCode::invalid_config, what + " needs a 'matrix' list");
    Mat m = matrix_from_list(g.at("matrix"), dim, what + " matrix");
    Mat inv;
    if (g.contains("inverse")) {
      inv = matrix_from_list(g.at("inverse"), dim, what + " inverse");
    } else {
      inv = Eigen::MatrixXd(m).partialPivLu().inverse();
    }
    gens.push_back(std::move(m));
    inverses.push_back(std::move(inv));
  }
  const int rank = static_cast<int>(gens.size());
  return GroupRep(rank, std::move(gens), std::move(inverses), label, det_tol);
}

GroupRep load_representation(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open representation file " + path.string() + ": file not found or unreadable");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_representation(buf.str(), path.string());
}

}  // namespace periods

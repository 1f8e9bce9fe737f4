#include "suites.hpp"

#include <cmath>
#include <limits>

#include "cocycles.hpp"
#include "error.hpp"

namespace periods {

namespace {

std::mt19937_64 suite_rng(std::uint64_t seed, int d, int suite) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(suite)};
  return std::mt19937_64(seq);
}

Mat gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

double log_abs_det(const Mat& m) { return std::log(std::abs(Eigen::MatrixXd(m).partialPivLu().determinant())); }

void check_record(SuiteResult* weyl, const SpectralRecord& rec, double log_det,
                  const std::function<SuiteInstance()>& describe) {
  if (weyl == nullptr) return;
  weyl->record(std::max(weyl_violation(rec), determinant_sum_residual(rec, log_det)), describe);
}

Vec wedge_of_random_frame(int d, int k, std::mt19937_64& rng) { return wedge(gaussian(d, k, rng)); }

// Applies a lifted matrix to a k-vector; the scale is irrelevant for directions.
Vec apply(const ScaledMatrix& m, const Vec& v) { return m.unit() * v; }

double log_norm_image(const ScaledMatrix& m, const Vec& v) { return std::log((m.unit() * v).norm()) + m.log_scale(); }

}  // namespace

void SuiteResult::record(double residual, const std::function<SuiteInstance()>& describe) {
  ++instances;
  if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
  if (instances == 1 || residual > max_residual) {
    max_residual = residual;
    worst = describe();
  }
}

Mat random_sl(int d, std::mt19937_64& rng, double max_cond) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Mat m = gaussian(d, d, rng);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(m)};
    const auto& sv = svd.singularValues();
    if (!(sv(d - 1) > 0.0) || sv(0) / sv(d - 1) > max_cond) continue;
    double det = Eigen::MatrixXd(m).partialPivLu().determinant();
    if (det < 0) {
      m.row(0) *= -1.0;
      det = -det;
    }
    return m / std::pow(det, 1.0 / d);
  }
  fail(ErrorCode::numeric, "could not sample a well-conditioned SL(" + std::to_string(d) + ") matrix");
}

PlantedElement random_proximal(int d, std::mt19937_64& rng, double gap_lo, double gap_hi) {
  std::uniform_real_distribution<double> top(gap_lo, gap_hi);
  std::uniform_real_distribution<double> rest(0.1, 1.0);
  std::bernoulli_distribution coin;
  std::vector<double> x(static_cast<std::size_t>(d), 0.0);
  for (int i = 1; i < d; ++i) {
    x[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i - 1)] - (i == 1 ? top(rng) : rest(rng));
  }
  double mean = 0.0;
  for (double v : x) mean += v / d;
  for (double& v : x) v -= mean;
  Mat diag = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) diag(i, i) = (coin(rng) ? 1.0 : -1.0) * std::exp(x[static_cast<std::size_t>(i)]);
  const Mat p = random_sl(d, rng, 1e2);
  const Mat p_inv = Eigen::MatrixXd(p).partialPivLu().inverse();
  return {Mat(p * diag * p_inv), x};
}

SuiteResult cocycle_suite(int d, std::size_t n, std::uint64_t seed, SuiteResult* weyl) {
  auto rng = suite_rng(seed, d, 1);
  SuiteResult out;
  out.name = "cocycle";
  out.tolerance = kIdentityTolerance;
  for (std::size_t i = 0; i < n; ++i) {
    const int k = 1 + static_cast<int>(i % static_cast<std::size_t>(d));
    const Mat g = random_sl(d, rng);
    const Mat h = random_sl(d, rng);
    const Mat frame = gaussian(d, k, rng);
    auto describe = [&] {
      return SuiteInstance{"d=" + std::to_string(d) + " #" + std::to_string(i) + " k=" + std::to_string(k), k,
                           {{"g", g}, {"h", h}, {"frame", frame}}, {}};
    };
    const ScaledMatrix sg(g);
    const ScaledMatrix sh(h);
    out.record(cocycle_identity_residual(sg, sh, frame), describe);
    check_record(weyl, spectral_record(sg), log_abs_det(g), describe);
    check_record(weyl, spectral_record(sh), log_abs_det(h), describe);
    check_record(weyl, spectral_record(sg * sh), log_abs_det(g) + log_abs_det(h), describe);
  }
  return out;
}

SuiteResult gromov_cocycle_suite(int d, std::size_t n, std::uint64_t seed, SuiteResult* weyl) {
  auto rng = suite_rng(seed, d, 2);
  SuiteResult out;
  out.name = "gromov_cocycle";
  out.tolerance = kIdentityTolerance;
  for (std::size_t i = 0; i < n; ++i) {
    const int k = 1 + static_cast<int>(i % static_cast<std::size_t>(d - 1));
    const Mat g = random_sl(d, rng);
    const Mat g_inv = Eigen::MatrixXd(g).partialPivLu().inverse();
    const Mat coframe = gaussian(d, k, rng);
    const Mat frame = gaussian(d, k, rng);
    auto describe = [&] {
      return SuiteInstance{"d=" + std::to_string(d) + " #" + std::to_string(i) + " k=" + std::to_string(k), k,
                           {{"g", g}, {"coframe", coframe}, {"frame", frame}}, {}};
    };
    const ScaledMatrix sg(g);
    out.record(gromov_cocycle_residual(sg, ScaledMatrix(g_inv), coframe, frame), describe);
    check_record(weyl, spectral_record(sg), log_abs_det(g), describe);
  }
  return out;
}

SuiteResult period_identity_suite(int d, std::size_t n, std::uint64_t seed, SuiteResult* weyl) {
  auto rng = suite_rng(seed, d, 3);
  SuiteResult out;
  out.name = "period_identity";
  out.tolerance = kIdentityTolerance;
  for (std::size_t i = 0; i < n; ++i) {
    const int k = 1 + static_cast<int>(i % static_cast<std::size_t>(d));
    const auto planted = random_proximal(d, rng);
    auto describe = [&] {
      return SuiteInstance{"d=" + std::to_string(d) + " #" + std::to_string(i) + " k=" + std::to_string(k), k,
                           {{"g", planted.matrix}}, {}};
    };
    const ScaledMatrix sg(planted.matrix);
    out.record(period_identity_residual(sg, k), describe);
    check_record(weyl, spectral_record(sg), log_abs_det(planted.matrix), describe);
  }
  return out;
}

std::vector<SuiteResult> class_suites(const GroupRep& rep, int max_len, std::uint64_t seed, SuiteResult* weyl) {
  const int d = rep.dim();
  const WeightTower tower(rep);
  auto rng = suite_rng(seed, d, 4);
  SuiteResult cocycle;
  cocycle.name = "class_cocycle";
  cocycle.tolerance = kIdentityTolerance;
  SuiteResult gromov;
  gromov.name = "class_gromov_cocycle";
  gromov.tolerance = kIdentityTolerance;
  SuiteResult period;
  period.name = "class_period_identity";
  period.tolerance = kIdentityTolerance;
  const auto& alphabet = rep.alphabet();

  for (const auto& cls : enumerate_classes(alphabet, max_len, ClassMode::all)) {
    const auto letters = cls.letters();
    const std::string word = alphabet.format(letters);
    // g = prefix, h = suffix; a single letter is paired with itself.
    const std::size_t cut = letters.size() == 1 ? 1 : letters.size() / 2;
    const auto prefix = letters.first(cut);
    const auto suffix = letters.size() == 1 ? letters : letters.subspan(cut);
    // The Gromov-cocycle check moves the class's fixed-point pair by its first
    // letter, which keeps the moved covector well conditioned.
    const Word head_inv = reduce_unchecked(letters.first(1)).inverse();
    auto describe = [&](int k) {
      return [&, k] {
        std::vector<std::pair<std::string, Mat>> mats;
        for (int l = 1; l <= alphabet.rank(); ++l) mats.emplace_back("generator_" + std::to_string(l), rep.generator(l));
        return SuiteInstance{"class " + word + " k=" + std::to_string(k), k, std::move(mats),
                             {word, alphabet.format(prefix), alphabet.format(suffix)}};
      };
    };

    const auto rec = spectral_record(tower, letters);
    check_record(weyl, rec, tower.log_abs_det(letters), describe(0));

    for (int k = 1; k <= d; ++k) period.record(period_identity_residual(tower, letters, k), describe(k));

    for (int k = 1; k < d; ++k) {
      const GroupRep& level = tower.level(k);
      const ScaledMatrix g = evaluate(level, prefix);
      const ScaledMatrix h = evaluate(level, suffix);
      std::vector<Letter> whole(prefix.begin(), prefix.end());
      whole.insert(whole.end(), suffix.begin(), suffix.end());
      const ScaledMatrix gh = evaluate(level, whole);
      const Vec omega = wedge_of_random_frame(d, k, rng);
      const double lhs = busemann_weight_kvector(gh, omega);
      const double rhs = busemann_weight_kvector(g, apply(h, omega)) + busemann_weight_kvector(h, omega);
      cocycle.record(std::abs(lhs - rhs), describe(k));

      if (!(rec.level_gap(k) > kDefaultGapTolerance)) continue;
      const ScaledMatrix w = evaluate(level, letters);
      const auto fixed = attracting_data(w);
      const ScaledMatrix head = evaluate(level, letters.first(1));
      const ScaledMatrix head_inv_m = evaluate(level, head_inv.letters());
      const Vec moved_theta = head_inv_m.unit().transpose() * fixed.covec;
      const Vec moved_v = apply(head, fixed.vec);
      const double residual = gromov_pair(moved_theta, moved_v) - gromov_pair(fixed.covec, fixed.vec) +
                              (log_norm_image(head_inv_m.transpose(), fixed.covec) - std::log(fixed.covec.norm())) +
                              (log_norm_image(head, fixed.vec) - std::log(fixed.vec.norm()));
      gromov.record(std::abs(residual), describe(k));
    }
  }
  return {cocycle, gromov, period};
}

PowerLimitResult power_limit_suite(std::size_t elements, std::uint64_t seed, int n_low, int n_high) {
  PowerLimitResult out;
  out.n_low = n_low;
  out.n_high = n_high;
  for (std::size_t i = 0; i < elements; ++i) {
    const int d = 2 + static_cast<int>(i % 3);
    auto rng = suite_rng(seed + i, d, 5);
    const auto planted = random_proximal(d, rng, 0.5, 1.5);
    const ScaledMatrix g(planted.matrix);
    const double lambda = log_spectral_radius(g);
    const auto fixed = attracting_data(g);
    const double gr = gromov_pair(fixed.covec, fixed.vec);
    auto defect = [&](int n) { return std::abs(log_operator_norm(g.power(n)) - n * lambda + gr); };
    const double lo = defect(n_low);
    const double hi = defect(n_high);
    out.defects.emplace_back(lo, hi);
    out.max_defect_high = std::max(out.max_defect_high, hi);
    if (hi < lo) ++out.improved;
    ++out.elements;
  }
  return out;
}

}  // namespace periods

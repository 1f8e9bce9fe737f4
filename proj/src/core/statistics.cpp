#include "statistics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include <boost/math/tools/minima.hpp>

#include "cocycles.hpp"
#include "error.hpp"

namespace periods {

namespace {

bool eligible(const PeriodRecord& rec) { return rec.proximal; }

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rmse = 0.0;
};

// Weighted least squares; rmse is the unweighted residual spread.
LineFit least_squares(std::span<const double> x, std::span<const double> y, std::span<const double> w) {
  const double sw = std::accumulate(w.begin(), w.end(), 0.0);
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += w[i] * x[i] / sw;
    my += w[i] * y[i] / sw;
  }
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - fit.intercept - fit.slope * x[i];
    rss += e * e;
  }
  fit.rmse = std::sqrt(rss / static_cast<double>(x.size()));
  return fit;
}

// Proximal records sorted by order period.
std::vector<const PeriodRecord*> by_order(const Dataset& data, std::size_t order) {
  std::vector<const PeriodRecord*> out;
  for (const auto& rec : data.records) {
    if (eligible(rec)) out.push_back(&rec);
  }
  std::stable_sort(out.begin(), out.end(), [order](const PeriodRecord* a, const PeriodRecord* b) {
    return a->jordan_period[order] < b->jordan_period[order];
  });
  return out;
}

std::size_t count_at_most(const std::vector<const PeriodRecord*>& sorted, std::size_t order, double t) {
  auto it = std::upper_bound(sorted.begin(), sorted.end(), t,
                             [order](double v, const PeriodRecord* r) { return v < r->jordan_period[order]; });
  return static_cast<std::size_t>(it - sorted.begin());
}

void check_index(const Dataset& data, std::size_t index, const char* what) {
  if (index >= data.functionals.size()) {
    fail(ErrorCode::invalid_input, std::string(what) + " functional index out of range");
  }
}

double normalization(double h, double t, std::size_t count) {
  return h * t * std::exp(-h * t) * static_cast<double>(count);
}

}  // namespace

std::size_t Dataset::exceptional_count() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const PeriodRecord& r) { return !r.proximal; }));
}

std::size_t Dataset::functional_index(std::string_view name) const {
  for (std::size_t i = 0; i < functionals.size(); ++i) {
    if (functionals[i].name() == name) return i;
  }
  fail(ErrorCode::invalid_config, "no functional named '" + std::string(name) + "' in the dataset");
}

std::pair<ProximalityCert, int> class_certificate(const GroupRep& rep, const CyclicWord& cls, double r, double eps,
                                                  int samples, double gap_tol) {
  std::pair<ProximalityCert, int> best;
  bool have = false;
  for (std::size_t start = 0; start < cls.period(); ++start) {
    const Word w = cls.rotation(start);
    const auto cert = proximality_cert(evaluate(rep, w), r, eps, samples, gap_tol);
    if (cert.is_proximal) return {cert, static_cast<int>(start)};
    if (!have || cert.r_value < best.first.r_value) {
      best = {cert, static_cast<int>(start)};
      have = true;
    }
  }
  return best;
}

PeriodRecord make_record(const WeightTower& tower, const CyclicWord& cls, std::span<const Functional> functionals,
                         const CollectOptions& options) {
  const auto spec = spectral_record(tower, cls.letters(), options.gap_tol);
  PeriodRecord out;
  out.word = tower.base().alphabet().format(cls.letters());
  out.length = static_cast<int>(cls.size());
  out.primitive = cls.is_primitive();
  out.prox_gap = spec.prox_gap;
  out.proximal = spec.prox_gap > options.gap_tol;
  for (const auto& phi : functionals) {
    out.jordan_period.push_back(phi.on_projection(spec.jordan));
    out.cartan_value.push_back(phi.on_projection(spec.cartan));
    std::optional<double> gr;
    try {
      gr = class_gromov(spec, phi);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::not_proximal) throw;
      out.proximal = false;
    }
    out.class_gromov.push_back(gr);
  }
  std::tie(out.cert, out.cert_rotation) = class_certificate(tower.base(), cls, options.r, options.eps,
                                                            options.contraction_samples, options.gap_tol);
  return out;
}

Dataset collect(const GroupRep& rep, std::vector<Functional> functionals, const CollectOptions& options) {
  if (functionals.empty()) fail(ErrorCode::invalid_config, "at least one functional is required");
  for (const auto& phi : functionals) {
    if (phi.dim() != rep.dim()) {
      fail(ErrorCode::invalid_config, "functional '" + phi.name() + "' has " + std::to_string(phi.coeffs().size()) +
                                          " coefficients; the representation needs " +
                                          std::to_string(rep.dim() - 1));
    }
  }
  if (!(options.r > 0.0) || !(options.eps > 0.0)) fail(ErrorCode::invalid_config, "r and eps must be positive");
  const auto chunks = class_chunks(rep.alphabet(), options.max_len, options.limits);
  const WeightTower tower(rep);

  std::vector<std::vector<PeriodRecord>> results(chunks.size());
  std::vector<std::exception_ptr> errors(chunks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < chunks.size(); i = next.fetch_add(1)) {
      try {
        for_each_class(rep.alphabet(), chunks[i], options.mode, [&](const CyclicWord& cls) {
          results[i].push_back(make_record(tower, cls, functionals, options));
        });
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, options.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Dataset data;
  data.rep_label = rep.label();
  data.rank = rep.alphabet().rank();
  data.dim = rep.dim();
  data.max_len = options.max_len;
  data.mode = options.mode;
  data.r = options.r;
  data.eps = options.eps;
  data.gap_tol = options.gap_tol;
  data.functionals = std::move(functionals);
  std::uint64_t id = 0;
  for (auto& chunk : results) {
    for (auto& rec : chunk) {
      rec.class_id = id++;
      data.records.push_back(std::move(rec));
    }
  }
  return data;
}

double completeness_horizon(const Dataset& data, std::size_t order) {
  check_index(data, order, "order");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& rec : data.records) {
    if (!eligible(rec)) continue;
    const double p = rec.jordan_period[order];
    hi = std::max(hi, p);
    if (data.max_len > 0 && rec.length == data.max_len) lo = std::min(lo, p);
  }
  if (!std::isfinite(hi)) fail(ErrorCode::insufficient_data, "dataset has no proximal classes");
  return data.max_len > 0 && std::isfinite(lo) ? lo : hi;
}

std::vector<double> default_t_grid(const Dataset& data, std::size_t order, int points, double lo_frac,
                                   std::size_t min_classes) {
  if (points < 3) fail(ErrorCode::invalid_config, "the t-grid needs at least 3 points");
  const double T = completeness_horizon(data, order);
  const auto sorted = by_order(data, order);
  double lo = lo_frac * T;
  if (min_classes > 0) {
    if (sorted.size() < min_classes) {
      fail(ErrorCode::insufficient_data, "only " + std::to_string(sorted.size()) + " proximal classes; need " +
                                             std::to_string(min_classes));
    }
    lo = std::max(lo, sorted[min_classes - 1]->jordan_period[order]);
  }
  if (!(lo < T)) {
    fail(ErrorCode::insufficient_data, "fewer than " + std::to_string(min_classes) +
                                           " classes below the completeness horizon; raise max_len");
  }
  std::vector<double> grid;
  for (int i = 0; i < points; ++i) grid.push_back(lo + (T - lo) * i / (points - 1));
  return grid;
}

Dataset primitive_subset(const Dataset& data) {
  Dataset out = data;
  out.mode = ClassMode::primitive;
  out.records.clear();
  for (const auto& rec : data.records) {
    if (rec.primitive) out.records.push_back(rec);
  }
  return out;
}

void validate_t_grid(std::span<const double> t_grid) {
  if (t_grid.size() < 3) fail(ErrorCode::invalid_config, "the t-grid needs at least 3 points");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!std::isfinite(t_grid[i])) fail(ErrorCode::invalid_config, "t-grid values must be finite");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) fail(ErrorCode::invalid_config, "t-grid must be strictly increasing");
  }
}

GrowthFit count_and_fit(const Dataset& data, std::size_t order, std::span<const double> t_grid) {
  check_index(data, order, "order");
  validate_t_grid(t_grid);
  std::string offending;
  std::size_t bad = 0;
  for (const auto& rec : data.records) {
    if (eligible(rec) && !(rec.jordan_period[order] > 0.0)) {
      if (bad++ < 10) offending += (offending.empty() ? "" : ", ") + std::to_string(rec.class_id) + ":" + rec.word;
    }
  }
  if (bad > 0) {
    fail(ErrorCode::dual_cone, std::to_string(bad) + " classes have non-positive '" + data.functionals[order].name() +
                                   "' periods (functional outside the dual cone): " + offending +
                                   (bad > 10 ? ", ..." : ""));
  }
  const auto sorted = by_order(data, order);

  GrowthFit fit;
  fit.mode = data.mode;
  fit.t_grid.assign(t_grid.begin(), t_grid.end());
  for (double t : t_grid) fit.counts.push_back(count_at_most(sorted, order, t));

  const std::size_t first = t_grid.size() - std::max<std::size_t>(3, t_grid.size() / 2);
  std::vector<double> ts;
  std::vector<double> logn;
  for (std::size_t i = first; i < t_grid.size(); ++i) {
    if (fit.counts[i] == 0) continue;
    ts.push_back(t_grid[i]);
    logn.push_back(std::log(static_cast<double>(fit.counts[i])));
  }
  if (ts.size() < 3 || logn.front() == logn.back()) {
    fail(ErrorCode::insufficient_data, "growth fit needs at least 3 thresholds with increasing nonzero counts");
  }
  fit.t_lo = ts.front();
  fit.t_hi = ts.back();
  fit.window_points = ts.size();

  auto objective = [&](double h) {
    double acc = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double e = logn[i] - h * ts[i] + std::log(h * ts[i]);
      acc += e * e;
    }
    return acc;
  };
  // log N / t underestimates h; the bracket is generous on both sides.
  const double h0 = std::max(logn.back() / ts.back(), 1e-6);
  const auto [h, rss] = boost::math::tools::brent_find_minima(objective, h0 * 0.1, h0 * 10.0 + 1.0, 52);
  fit.h_hat = h;
  double jj = 0.0;
  for (double t : ts) jj += (t - 1.0 / h) * (t - 1.0 / h);
  const double dof = static_cast<double>(ts.size() - 1);
  fit.h_stderr = jj > 0.0 ? std::sqrt(rss / dof / jj) : std::numeric_limits<double>::infinity();
  if (!(fit.h_hat > 0.0)) fail(ErrorCode::numeric, "growth fit produced a non-positive rate");
  for (std::size_t i = 0; i < t_grid.size(); ++i) fit.normalization.push_back(normalization(h, t_grid[i], fit.counts[i]));
  return fit;
}

const char* observable_name(Observable o) { return o == Observable::jordan ? "jordan" : "cartan"; }

CltReport clt_report(const Dataset& data, std::size_t order, std::size_t obs, Observable observable,
                     std::span<const double> t_grid, double h_hat, std::size_t min_classes) {
  check_index(data, order, "order");
  check_index(data, obs, "observable");
  validate_t_grid(t_grid);
  const auto sorted = by_order(data, order);
  auto value = [&](const PeriodRecord* r) {
    return observable == Observable::jordan ? r->jordan_period[obs] : r->cartan_value[obs];
  };

  CltReport rep;
  rep.order_name = data.functionals[order].name();
  rep.obs_name = data.functionals[obs].name();
  rep.observable = observable;
  rep.self_conditioned = order == obs || data.functionals[order].coeffs() == data.functionals[obs].coeffs();
  rep.h_hat = h_hat;

  std::vector<double> means;
  std::vector<double> variances;
  std::vector<std::size_t> counts;
  for (double t : t_grid) {
    const std::size_t n = count_at_most(sorted, order, t);
    if (n < min_classes) {
      fail(ErrorCode::insufficient_data, "threshold t=" + std::to_string(t) + " selects " + std::to_string(n) +
                                             " classes; the CLT harness needs at least " +
                                             std::to_string(min_classes));
    }
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += value(sorted[i]);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += (value(sorted[i]) - mean) * (value(sorted[i]) - mean);
    var /= static_cast<double>(n - 1);
    means.push_back(mean);
    variances.push_back(var);
    counts.push_back(n);
  }
  // Sample means and variances at threshold t have sampling variance ~ 1/N(t);
  // weighting by N(t) keeps the few-class thresholds from dominating.
  std::vector<double> weights(counts.begin(), counts.end());
  const auto mean_fit = least_squares(t_grid, means, weights);
  const auto var_fit = least_squares(t_grid, variances, weights);
  rep.L_hat = mean_fit.slope;
  rep.mean_fit_rmse = mean_fit.rmse;
  rep.variance_fit_rmse = var_fit.rmse;
  if (!(var_fit.slope > 0.0)) {
    fail(ErrorCode::degenerate, "variance of '" + rep.obs_name + "' does not grow with t (slope " +
                                    std::to_string(var_fit.slope) +
                                    "); the observable is degenerate for this ordering");
  }
  rep.sigma_hat = std::sqrt(var_fit.slope);

  const std::vector<std::pair<double, double>> panel = {
      {-1.0, 1.0}, {-2.0, 2.0}, {0.0, std::numeric_limits<double>::infinity()}};
  for (std::size_t g = 0; g < t_grid.size(); ++g) {
    const std::size_t n = counts[g];
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double tau = sorted[i]->jordan_period[order];
      z[i] = (value(sorted[i]) - rep.L_hat * tau) / (rep.sigma_hat * std::sqrt(tau));
    }
    CltPoint p;
    p.t = t_grid[g];
    p.count = n;
    p.obs_mean = means[g];
    p.obs_variance = variances[g];
    p.z_mean = std::accumulate(z.begin(), z.end(), 0.0) / static_cast<double>(n);
    double zv = 0.0;
    for (double x : z) zv += (x - p.z_mean) * (x - p.z_mean);
    p.z_variance = zv / static_cast<double>(n - 1);
    p.normalization = normalization(h_hat, p.t, n);
    for (const auto& [a, b] : panel) {
      const auto inside = std::count_if(z.begin(), z.end(), [a = a, b = b](double x) { return x > a && x < b; });
      p.intervals.push_back({a, b, static_cast<double>(inside) / static_cast<double>(n), gaussian_cdf_interval(a, b)});
    }
    std::sort(z.begin(), z.end());
    p.ks = ks_distance(z);
    rep.points.push_back(std::move(p));
    if (g + 1 == t_grid.size()) rep.final_samples = std::move(z);
  }

  const std::size_t n = counts.back();
  double mo = 0.0;
  double mv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mo += sorted[i]->jordan_period[order];
    mv += value(sorted[i]);
  }
  mo /= static_cast<double>(n);
  mv /= static_cast<double>(n);
  double soo = 0.0;
  double svv = 0.0;
  double sov = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = sorted[i]->jordan_period[order] - mo;
    const double b = value(sorted[i]) - mv;
    soo += a * a;
    svv += b * b;
    sov += a * b;
  }
  rep.order_obs_correlation = (soo > 0.0 && svv > 0.0) ? sov / std::sqrt(soo * svv) : 1.0;
  return rep;
}

ProximalFraction proximal_fraction(const Dataset& data, std::size_t order, std::span<const double> t_grid,
                                   double h_hat) {
  check_index(data, order, "order");
  validate_t_grid(t_grid);
  const auto sorted = by_order(data, order);
  ProximalFraction out;
  out.r = data.r;
  out.eps = data.eps;
  out.min_r_value = std::numeric_limits<double>::infinity();
  for (const auto* rec : sorted) out.min_r_value = std::min(out.min_r_value, rec->cert.r_value);
  std::size_t any = 0;
  for (double t : t_grid) {
    ProximalPoint p;
    p.t = t;
    const std::size_t n = count_at_most(sorted, order, t);
    p.total = n;
    p.proximal = static_cast<std::uint64_t>(
        std::count_if(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n),
                      [](const PeriodRecord* r) { return r->cert.is_proximal; }));
    p.weighted = normalization(h_hat, t, p.proximal);
    p.fraction = n > 0 ? static_cast<double>(p.proximal) / static_cast<double>(n) : 0.0;
    any += p.proximal;
    out.points.push_back(p);
  }
  if (any == 0) {
    out.warning = "no class is (r, eps)-proximal at r=" + std::to_string(data.r) + ", eps=" +
                  std::to_string(data.eps) + "; the smallest observed r_value is " +
                  std::to_string(out.min_r_value);
  }
  return out;
}

std::vector<DefectSummary> benoist_report(const Dataset& data, std::size_t order, std::size_t phi,
                                          std::span<const double> t_grid) {
  check_index(data, order, "order");
  check_index(data, phi, "defect");
  validate_t_grid(t_grid);
  const auto sorted = by_order(data, order);
  std::vector<DefectSummary> out;
  for (double t : t_grid) {
    const std::size_t n = count_at_most(sorted, order, t);
    std::vector<double> defects;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& rec = *sorted[i];
      if (!rec.class_gromov[phi]) continue;
      defects.push_back(std::abs(rec.cartan_value[phi] - rec.jordan_period[phi] + *rec.class_gromov[phi]));
    }
    std::sort(defects.begin(), defects.end());
    DefectSummary s;
    s.t = t;
    s.count = defects.size();
    if (!defects.empty()) {
      s.max = defects.back();
      s.q50 = nearest_rank(defects, 0.5);
      s.q90 = nearest_rank(defects, 0.9);
      s.q99 = nearest_rank(defects, 0.99);
    }
    out.push_back(s);
  }
  return out;
}

double gaussian_cdf_interval(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) fail(ErrorCode::invalid_input, "gaussian_cdf_interval: NaN bound");
  if (a > b) fail(ErrorCode::invalid_input, "gaussian_cdf_interval needs a <= b");
  const double s = std::sqrt(0.5);
  // Upper tails subtract accurately for a >= 0, lower tails for b <= 0.
  if (a >= 0.0) return 0.5 * (std::erfc(a * s) - std::erfc(b * s));
  if (b <= 0.0) return 0.5 * (std::erfc(-b * s) - std::erfc(-a * s));
  return 1.0 - 0.5 * std::erfc(-a * s) - 0.5 * std::erfc(b * s);
}

double ks_distance(std::vector<double> samples) {
  if (samples.empty()) fail(ErrorCode::insufficient_data, "KS distance of an empty sample");
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = 0.5 * std::erfc(-samples[i] * std::sqrt(0.5));
    d = std::max({d, static_cast<double>(i + 1) / n - cdf, cdf - static_cast<double>(i) / n});
  }
  return d;
}

double nearest_rank(std::span<const double> sorted, double q) {
  if (sorted.empty() || !(q > 0.0) || q > 1.0) fail(ErrorCode::invalid_input, "nearest_rank needs data and q in (0,1]");
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::max<std::size_t>(rank, 1) - 1];
}

Dataset synthetic_dataset(const SyntheticSpec& spec) {
  if (!(spec.h > 0.0) || !(spec.sigma > 0.0) || !std::isfinite(spec.L) || spec.classes < 3) {
    fail(ErrorCode::invalid_config, "synthetic dataset needs h > 0, sigma > 0, finite L and at least 3 classes");
  }
  Dataset data;
  data.rep_label = "synthetic(h=" + std::to_string(spec.h) + ",L=" + std::to_string(spec.L) +
                   ",sigma=" + std::to_string(spec.sigma) + ")";
  data.rank = 0;
  data.dim = 2;
  data.max_len = 0;
  data.r = 1.0;
  data.eps = 1.0;
  data.functionals = {Functional({1.0}, "order"), Functional({1.0}, "obs")};
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal;
  double x = 1.0;
  for (std::size_t j = 0; j < spec.classes; ++j) {
    // Newton on x - log x = log(j + 3), x = h t > 1, warm-started.
    const double target = std::log(static_cast<double>(j + 3));
    x = std::max(x, 1.0 + 1e-9);
    for (int it = 0; it < 100; ++it) {
      const double step = (x - std::log(x) - target) / (1.0 - 1.0 / x);
      x = std::max(x - step, 1.0 + 1e-12);
      if (std::abs(step) < 1e-14 * x) break;
    }
    const double tau = x / spec.h;
    const double obs = spec.L * tau + spec.sigma * std::sqrt(tau) * normal(rng);
    PeriodRecord rec;
    rec.class_id = j;
    rec.word = "s" + std::to_string(j);
    rec.length = 0;
    rec.proximal = true;
    rec.prox_gap = tau;
    rec.jordan_period = {tau, obs};
    rec.cartan_value = {tau, obs};
    rec.class_gromov = {0.0, 0.0};
    rec.cert.r_value = 1.0;
    rec.cert.is_proximal = true;
    rec.cert.contraction_ok = true;
    data.records.push_back(std::move(rec));
  }
  return data;
}

}  // namespace periods

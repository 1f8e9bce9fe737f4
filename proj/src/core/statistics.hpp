#pragma once

// Period datasets over enumerated conjugacy classes and the counting /
// central-limit statistics computed from them.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "functional.hpp"
#include "group_words.hpp"
#include "representations.hpp"
#include "spectral.hpp"

namespace periods {

struct PeriodRecord {
  std::uint64_t class_id = 0;  // position in the length-lex class stream
  std::string word;
  int length = 0;
  bool primitive = true;
  // Eigen-gap at level 1 and at every level touched by a functional; only
  // proximal records enter the statistics.
  bool proximal = false;
  double prox_gap = 0.0;
  std::vector<double> jordan_period;  // phi(lambda), one per functional
  std::vector<double> cartan_value;   // phi(a) of the canonical representative
  std::vector<std::optional<double>> class_gromov;
  ProximalityCert cert;  // best cyclically reduced representative
  int cert_rotation = 0;  // rotation of the canonical word that carries `cert`
};

struct Dataset {
  std::string rep_label;
  int rank = 0;
  int dim = 0;
  int max_len = 0;  // 0 for datasets not produced by enumeration
  ClassMode mode = ClassMode::all;
  double r = 0.0;
  double eps = 0.0;
  double gap_tol = kDefaultGapTolerance;
  std::vector<Functional> functionals;
  std::vector<PeriodRecord> records;

  std::size_t exceptional_count() const;
  // Throws invalid_config for an unknown name.
  std::size_t functional_index(std::string_view name) const;
};

struct CollectOptions {
  int max_len = 8;
  ClassMode mode = ClassMode::all;
  double r = 1.2;
  double eps = 0.05;
  int contraction_samples = kDefaultContractionSamples;
  double gap_tol = kDefaultGapTolerance;
  int workers = 1;
  EnumerationLimits limits;
};

// (r, eps)-certificate of a class: the first cyclic rotation that is
// (r, eps)-proximal, else the rotation with the smallest r_value.
std::pair<ProximalityCert, int> class_certificate(const GroupRep& rep, const CyclicWord& cls, double r, double eps,
                                                  int samples, double gap_tol);

PeriodRecord make_record(const WeightTower& tower, const CyclicWord& cls, std::span<const Functional> functionals,
                         const CollectOptions& options);

// One record per class, in class-id order regardless of the worker count.
Dataset collect(const GroupRep& rep, std::vector<Functional> functionals, const CollectOptions& options);

struct GrowthFit {
  double h_hat = 0.0;
  double h_stderr = 0.0;
  double t_lo = 0.0;  // fit window
  double t_hi = 0.0;
  std::size_t window_points = 0;
  ClassMode mode = ClassMode::all;
  std::vector<double> t_grid;
  std::vector<std::uint64_t> counts;
  std::vector<double> normalization;  // h t exp(-h t) N(t)
};

// Period threshold below which the enumeration up to max_len is complete:
// the smallest period among classes of the maximal length (largest period
// when max_len is 0).
double completeness_horizon(const Dataset& data, std::size_t order);

// `points` evenly spaced thresholds on [max(lo_frac T, t_min), T], with T the
// completeness horizon and t_min the period of the min_classes-th class.
std::vector<double> default_t_grid(const Dataset& data, std::size_t order, int points = 8, double lo_frac = 0.4,
                                   std::size_t min_classes = 200);

// Records of primitive classes only, ids preserved.
Dataset primitive_subset(const Dataset& data);

// Checked, strictly increasing grid with at least 3 points.
void validate_t_grid(std::span<const double> t_grid);

// Fits log N(t) = h t - log(h t) over the trailing half of the grid.
// Throws dual_cone when a proximal record has a non-positive period and
// insufficient_data when fewer than 3 window points have N(t) > 0.
GrowthFit count_and_fit(const Dataset& data, std::size_t order, std::span<const double> t_grid);

enum class Observable { jordan, cartan };
const char* observable_name(Observable o);

struct IntervalMass {
  double a = 0.0;
  double b = 0.0;
  double empirical = 0.0;
  double gaussian = 0.0;
};

struct CltPoint {
  double t = 0.0;
  std::uint64_t count = 0;
  double obs_mean = 0.0;
  double obs_variance = 0.0;
  double z_mean = 0.0;
  double z_variance = 0.0;
  double ks = 0.0;
  double normalization = 0.0;  // h t exp(-h t) N(t)
  std::vector<IntervalMass> intervals;
};

struct CltReport {
  std::string order_name;
  std::string obs_name;
  Observable observable = Observable::jordan;
  bool self_conditioned = false;
  double h_hat = 0.0;
  double L_hat = 0.0;
  double sigma_hat = 0.0;
  double mean_fit_rmse = 0.0;
  double variance_fit_rmse = 0.0;
  // Pearson correlation of order and observable at the final threshold;
  // values near 1 flag an observable tied to the ordering.
  double order_obs_correlation = 0.0;
  std::vector<CltPoint> points;
  std::vector<double> final_samples;  // normalized samples at the final threshold, ascending
};

constexpr std::size_t kMinClassesPerThreshold = 200;

// L_hat and sigma_hat^2 are slopes of the sample mean and variance of the
// observable against t, weighted by N(t). Normalized samples are
// (obs - L t_i) / (sigma sqrt(t_i)) with t_i the class's own order period.
// Throws degenerate when sigma^2 <= 0 and insufficient_data when a threshold
// selects fewer than min_classes.
CltReport clt_report(const Dataset& data, std::size_t order, std::size_t obs, Observable observable,
                     std::span<const double> t_grid, double h_hat,
                     std::size_t min_classes = kMinClassesPerThreshold);

struct ProximalPoint {
  double t = 0.0;
  std::uint64_t total = 0;
  std::uint64_t proximal = 0;
  double weighted = 0.0;  // h t exp(-h t) #proximal
  double fraction = 0.0;  // proximal / total
};

struct ProximalFraction {
  double r = 0.0;
  double eps = 0.0;
  double min_r_value = 0.0;
  std::vector<ProximalPoint> points;
  std::optional<std::string> warning;
};

ProximalFraction proximal_fraction(const Dataset& data, std::size_t order, std::span<const double> t_grid,
                                   double h_hat);

struct DefectSummary {
  double t = 0.0;
  std::uint64_t count = 0;
  double max = 0.0;
  double q50 = 0.0;
  double q90 = 0.0;
  double q99 = 0.0;
};

// |phi(a) - phi(lambda) + class_gromov_phi| over records whose `order`
// period is <= t.
std::vector<DefectSummary> benoist_report(const Dataset& data, std::size_t order, std::size_t phi,
                                          std::span<const double> t_grid);

// Standard normal mass of [a, b]; a and b may be infinite.
double gaussian_cdf_interval(double a, double b);
// One-sample Kolmogorov-Smirnov distance to the standard normal.
double ks_distance(std::vector<double> samples);
// Nearest-rank quantile of ascending data, q in (0, 1].
double nearest_rank(std::span<const double> sorted, double q);

struct SyntheticSpec {
  double h = 2.0;
  double L = 1.0;
  double sigma = 0.5;
  std::size_t classes = 1'000'000;
  std::uint64_t seed = 1;
};

// The j-th order period (j >= 1) solves exp(h t) / (h t) = j + 2, so N(t) follows the
// prime-orbit law exactly; the observable is L t_j + sigma sqrt(t_j) Z_j.
// Functionals are named "order" and "obs".
Dataset synthetic_dataset(const SyntheticSpec& spec);

}  // namespace periods

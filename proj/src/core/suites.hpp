#pragma once

// Residual suites for the cocycle identities on seeded random instances and
// on enumerated classes of a representation.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "representations.hpp"
#include "spectral.hpp"

namespace periods {

// Enough to replay one instance.
struct SuiteInstance {
  std::string label;  // e.g. "d=3 #417 k=2" or "class abAB k=1"
  int level = 0;
  std::vector<std::pair<std::string, Mat>> matrices;  // dense, unscaled
  std::vector<std::string> words;
};

struct SuiteResult {
  std::string name;
  double tolerance = 0.0;
  std::size_t instances = 0;
  double max_residual = 0.0;
  SuiteInstance worst;

  bool passed() const { return max_residual < tolerance; }
  // Keeps the instance when its residual is the largest so far; NaN counts as largest.
  void record(double residual, const std::function<SuiteInstance()>& describe);
};

constexpr double kIdentityTolerance = 1e-8;

// Gaussian matrix rescaled to |det| = 1 with det > 0 and condition number at
// most max_cond (resampled otherwise).
Mat random_sl(int d, std::mt19937_64& rng, double max_cond = 1e3);
// P diag(s_i exp(x_i)) P^-1 with x strictly decreasing, sum x = 0, random
// signs s_i, x_1 - x_2 drawn from [gap_lo, gap_hi] and other gaps >= 0.1.
struct PlantedElement {
  Mat matrix;
  std::vector<double> jordan;  // the planted x
};
PlantedElement random_proximal(int d, std::mt19937_64& rng, double gap_lo = 0.1, double gap_hi = 2.0);

// Random instances; Weyl / determinant checks of every SpectralRecord the
// suite builds are accumulated into `weyl` when given.
SuiteResult cocycle_suite(int d, std::size_t n, std::uint64_t seed, SuiteResult* weyl = nullptr);
SuiteResult gromov_cocycle_suite(int d, std::size_t n, std::uint64_t seed, SuiteResult* weyl = nullptr);
SuiteResult period_identity_suite(int d, std::size_t n, std::uint64_t seed, SuiteResult* weyl = nullptr);

// The three identities over every class of length <= max_len, evaluated
// through the exterior-power tower. Returns cocycle, Gromov-cocycle and
// period-identity results in that order.
std::vector<SuiteResult> class_suites(const GroupRep& rep, int max_len, std::uint64_t seed,
                                      SuiteResult* weyl = nullptr);

// |a_1(g^n) - n lambda_1(g) + Gr(g-, g+)| for planted proximal elements.
struct PowerLimitResult {
  std::size_t elements = 0;
  int n_low = 16;
  int n_high = 32;
  double max_defect_high = 0.0;
  std::size_t improved = 0;  // defect(n_high) < defect(n_low)
  std::vector<std::pair<double, double>> defects;  // (n_low, n_high) per element
};
PowerLimitResult power_limit_suite(std::size_t elements, std::uint64_t seed, int n_low = 16, int n_high = 32);

}  // namespace periods

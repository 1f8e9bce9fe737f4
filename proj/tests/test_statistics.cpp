#include <algorithm>
#include <cmath>
#include <numbers>

#include "cocycles.hpp"
#include "doctest.h"
#include "statistics.hpp"
#include "test_util.hpp"

using namespace periods;

namespace {

std::vector<Functional> default_functionals() { return {Functional::length(2), Functional::chi(2, 1)}; }

CollectOptions options(int max_len, int workers = 1) {
  CollectOptions o;
  o.max_len = max_len;
  o.workers = workers;
  return o;
}

const GroupRep& schottky() {
  static const GroupRep rep = schottky_sl2(4.0, std::numbers::pi / 4);
  return rep;
}

// Composite Simpson rule for the standard normal density.
double simpson_mass(double a, double b, int n = 20000) {
  auto f = [](double x) { return std::exp(-x * x / 2) / std::sqrt(2 * std::numbers::pi); };
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4 : 2);
  return acc * h / 3;
}

const PeriodRecord& find_word(const Dataset& d, const std::string& word) {
  const auto it = std::find_if(d.records.begin(), d.records.end(), [&](const auto& r) { return r.word == word; });
  REQUIRE(it != d.records.end());
  return *it;
}

}  // namespace

TEST_SUITE("statistics") {
  TEST_CASE("length-one classes all have period 2 log 4") {
    const Dataset d = collect(schottky(), default_functionals(), options(1));
    REQUIRE(d.records.size() == 4);
    for (const auto& rec : d.records) {
      CHECK(rec.jordan_period[0] == doctest::Approx(2 * std::log(4.0)).epsilon(1e-13));
      CHECK(rec.jordan_period[1] == doctest::Approx(std::log(4.0)).epsilon(1e-13));
      CHECK(rec.length == 1);
    }
    CHECK(d.records[0].word == "a");
    CHECK(d.records[3].word == "B");
  }

  TEST_CASE("zero functional and mismatched dimensions are rejected") {
    CHECK(testutil::error_code_of([] { Functional({0.0}, "zero"); }) == ErrorCode::invalid_input);
    CHECK(testutil::error_code_of([] { collect(schottky(), {Functional::length(3)}, options(2)); }) ==
          ErrorCode::invalid_config);
  }

  TEST_CASE("record count matches the class enumeration") {
    const Dataset d = collect(schottky(), default_functionals(), options(8));
    CHECK(d.records.size() == enumerate_classes(schottky().alphabet(), 8, ClassMode::all).size());
    for (std::size_t i = 0; i < d.records.size(); ++i) CHECK(d.records[i].class_id == i);
    const Dataset p = collect(schottky(), default_functionals(), [] {
      auto o = options(8);
      o.mode = ClassMode::primitive;
      return o;
    }());
    CHECK(p.records.size() == enumerate_classes(schottky().alphabet(), 8, ClassMode::primitive).size());
  }

  TEST_CASE("collection is independent of the worker count") {
    const Dataset one = collect(schottky(), default_functionals(), options(7, 1));
    const Dataset four = collect(schottky(), default_functionals(), options(7, 4));
    REQUIRE(one.records.size() == four.records.size());
    for (std::size_t i = 0; i < one.records.size(); ++i) {
      const auto& a = one.records[i];
      const auto& b = four.records[i];
      CHECK(a.word == b.word);
      CHECK(a.jordan_period == b.jordan_period);
      CHECK(a.cartan_value == b.cartan_value);
      CHECK(a.cert.r_value == b.cert.r_value);
      CHECK(a.cert_rotation == b.cert_rotation);
    }
  }

  TEST_CASE("gaussian_cdf_interval against Simpson quadrature") {
    CHECK(gaussian_cdf_interval(-1.96, 1.96) == doctest::Approx(0.9500042).epsilon(1e-6));
    for (auto [a, b] : {std::pair{-1.0, 1.0}, {0.0, 2.5}, {-3.0, -0.5}, {1.2, 1.3}}) {
      CHECK(gaussian_cdf_interval(a, b) == doctest::Approx(simpson_mass(a, b)).epsilon(1e-10));
    }
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(gaussian_cdf_interval(-inf, inf) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gaussian_cdf_interval(0.0, inf) == doctest::Approx(0.5).epsilon(1e-15));
  }

  TEST_CASE("ks distance and nearest rank") {
    const std::vector<double> sorted = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    CHECK(nearest_rank(sorted, 0.5) == 5);
    CHECK(nearest_rank(sorted, 0.99) == 10);
    CHECK(nearest_rank(sorted, 0.1) == 1);
    // One point at 0: the CDF jumps from 0 to 1 where Phi = 1/2.
    CHECK(ks_distance({0.0}) == doctest::Approx(0.5));
    CHECK(testutil::error_code_of([] { ks_distance({}); }) == ErrorCode::insufficient_data);
  }

  TEST_CASE("synthetic growth recovers h") {
    SyntheticSpec spec;
    spec.classes = 200'000;
    const Dataset d = synthetic_dataset(spec);
    const auto order = d.functional_index("order");
    const auto grid = default_t_grid(d, order);
    CHECK(grid.size() == 8);
    const GrowthFit fit = count_and_fit(d, order, grid);
    CHECK(std::abs(fit.h_hat - 2.0) < 0.05 * 2.0);
    for (double n : fit.normalization) CHECK(std::abs(n - 1.0) < 0.05);
  }

  TEST_CASE("synthetic CLT recovers L and sigma") {
    SyntheticSpec spec;
    spec.seed = 3;
    const Dataset d = synthetic_dataset(spec);
    const auto order = d.functional_index("order");
    const auto obs = d.functional_index("obs");
    const auto grid = default_t_grid(d, order);
    const GrowthFit fit = count_and_fit(d, order, grid);
    const CltReport rep = clt_report(d, order, obs, Observable::jordan, grid, fit.h_hat);
    CHECK(std::abs(rep.L_hat - 1.0) < 0.1);
    CHECK(std::abs(rep.sigma_hat - 0.5) < 0.05);
    CHECK(rep.points.back().ks < 0.05);
    CHECK(std::is_sorted(rep.final_samples.begin(), rep.final_samples.end()));
  }

  TEST_CASE("error paths: insufficient data, dual cone, degenerate") {
    SyntheticSpec spec;
    spec.classes = 5000;
    const Dataset base = synthetic_dataset(spec);
    const auto order = base.functional_index("order");
    const auto obs = base.functional_index("obs");

    Dataset one = base;
    one.records.resize(1);
    CHECK(testutil::error_code_of([&] { default_t_grid(one, order); }) == ErrorCode::insufficient_data);
    CHECK(testutil::error_code_of([&] { count_and_fit(one, order, std::vector<double>{1, 2, 3}); }) ==
          ErrorCode::insufficient_data);

    Dataset negative = base;
    negative.records[17].jordan_period[order] = -1.0;
    CHECK(testutil::error_code_of([&] { count_and_fit(negative, order, std::vector<double>{1, 2, 3}); }) ==
          ErrorCode::dual_cone);

    // A constant observable has zero variance at every threshold.
    Dataset locked = base;
    for (auto& rec : locked.records) rec.jordan_period[obs] = 1.0;
    const auto grid = default_t_grid(locked, order, 8, 0.4, 200);
    CHECK(testutil::error_code_of([&] { clt_report(locked, order, obs, Observable::jordan, grid, 2.0); }) ==
          ErrorCode::degenerate);

    CHECK(testutil::error_code_of([&] { count_and_fit(base, order, std::vector<double>{1, 2}); }) ==
          ErrorCode::invalid_config);
    CHECK(testutil::error_code_of([&] { count_and_fit(base, order, std::vector<double>{1, 3, 2}); }) ==
          ErrorCode::invalid_config);
  }

  TEST_CASE("schottky counting normalization is near one at max_len 12") {
    const Dataset d = collect(schottky(), default_functionals(), options(12, 4));
    const auto grid = default_t_grid(d, 0);
    const GrowthFit fit = count_and_fit(d, 0, grid);
    CHECK(fit.normalization.back() >= 0.5);
    CHECK(fit.normalization.back() <= 2.0);
    CHECK(grid.back() == doctest::Approx(completeness_horizon(d, 0)));
    for (std::size_t i = 0; i + 1 < fit.counts.size(); ++i) CHECK(fit.counts[i] <= fit.counts[i + 1]);

    // Benoist defects shrink along powers of a single class.
    const auto defect = [&](const std::string& w) {
      const auto& rec = find_word(d, w);
      return std::abs(rec.cartan_value[1] - rec.jordan_period[1] + *rec.class_gromov[1]);
    };
    CHECK(defect("abab") < defect("ab"));
    CHECK(defect("abababab") < defect("abab"));
    CHECK(defect("abababababab") < 1e-6);
    const auto defects = benoist_report(d, 0, 1, grid);
    CHECK(defects.back().q99 < 0.5);
    CHECK(defects.back().count == fit.counts.back());
  }

  TEST_CASE("proximal fraction warns when no class qualifies") {
    auto o = options(6);
    o.r = 0.5;  // r_value is at least 1
    const Dataset d = collect(schottky(), default_functionals(), o);
    const auto pf = proximal_fraction(d, 0, std::vector<double>{4, 6, 8}, 0.5);
    REQUIRE(pf.warning.has_value());
    CHECK(pf.min_r_value >= 1.0 - 1e-12);
    for (const auto& p : pf.points) CHECK(p.proximal == 0);

    const Dataset ok = collect(schottky(), default_functionals(), options(6));
    CHECK_FALSE(proximal_fraction(ok, 0, std::vector<double>{4, 6, 8}, 0.5).warning.has_value());
  }

  TEST_CASE("opposition involution exchanges a class and its inverse") {
    const WeightTower tower(sym_power(schottky(), 2));
    const Functional phi({1.0, 0.25}, "phi");
    const Functional opp = phi.opposite();
    for (const auto& c : enumerate_classes(tower.base().alphabet(), 6, ClassMode::primitive)) {
      const auto rec = spectral_record(tower, c.letters());
      const auto inv = spectral_record(tower, c.as_word().inverse().letters());
      CHECK(opp.on_projection(inv.jordan) == doctest::Approx(phi.on_projection(rec.jordan)).epsilon(1e-10));
    }
    CHECK(Functional::length(3).is_symmetric());
    CHECK_FALSE(phi.is_symmetric());
  }
}

#include <cmath>
#include <numbers>
#include <random>

#include "cocycles.hpp"
#include "doctest.h"
#include "suites.hpp"
#include "test_util.hpp"

using namespace periods;
using testutil::diag;
using testutil::mat;

namespace {

Vec wedge3(const Vec& u, const Vec& v) {
  Vec w(3);
  w << u(0) * v(1) - u(1) * v(0), u(0) * v(2) - u(2) * v(0), u(1) * v(2) - u(2) * v(1);
  return w;
}

// log of the top eigenvalue modulus of a hyperbolic 2x2 matrix with unit determinant.
double sl2_length(const Mat& g) {
  const double tr = std::abs(g.trace());
  return std::log((tr + std::sqrt(tr * tr - 4.0)) / 2.0);
}

}  // namespace

TEST_SUITE("cocycles") {
  TEST_CASE("busemann weight examples") {
    const ScaledMatrix g(diag({4.0, 0.25}));
    CHECK(busemann_weight(g, Mat(Vec::Unit(2, 0))) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
    CHECK(busemann_weight(g, Mat(Vec::Unit(2, 1))) == doctest::Approx(-std::log(4.0)).epsilon(1e-14));
    Vec v(2);
    v << 1.0, 1.0;
    CHECK(busemann_weight(g, Mat(v)) == doctest::Approx(0.5 * std::log((16.0 + 1.0 / 16.0) / 2.0)).epsilon(1e-14));
    // A full frame picks up log|det| = 0.
    CHECK(std::abs(busemann_weight(g, Mat::Identity(2, 2))) < 1e-15);
    CHECK(testutil::error_code_of([&] { busemann_weight(g, Mat::Zero(2, 1)); }) == ErrorCode::invalid_input);
  }

  TEST_CASE("level-2 busemann weight matches explicit wedges in d=3") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
      const Mat g = random_sl(3, rng);
      const Mat f = testutil::gaussian(3, 2, rng);
      const Vec before = wedge3(f.col(0), f.col(1));
      const Vec after = wedge3(g * f.col(0), g * f.col(1));
      const double oracle = std::log(after.norm() / before.norm());
      CHECK(busemann_weight(ScaledMatrix(g), f) == doctest::Approx(oracle).epsilon(1e-11));
      CHECK(busemann_weight_kvector(exterior_power(ScaledMatrix(g), 2), before) ==
            doctest::Approx(oracle).epsilon(1e-11));
    }
  }

  TEST_CASE("cocycle and gromov-cocycle residuals vanish") {
    std::mt19937_64 rng(42);
    for (int d : {2, 3, 4}) {
      for (int trial = 0; trial < 50; ++trial) {
        const ScaledMatrix g(random_sl(d, rng));
        const ScaledMatrix h(random_sl(d, rng));
        for (int k = 1; k < d; ++k) {
          const Mat frame = testutil::gaussian(d, k, rng);
          const Mat coframe = testutil::gaussian(d, k, rng);
          CHECK(cocycle_identity_residual(g, h, frame) < 1e-10);
          CHECK(gromov_cocycle_residual(g, coframe, frame) < 1e-9);
        }
      }
    }
  }

  TEST_CASE("period identity on generators and a product, with the SL2 trace formula") {
    const GroupRep rep = schottky_sl2(4.0, std::numbers::pi / 4);
    const Mat a = rep.generator(1);
    const Mat ab = rep.generator(1) * rep.generator(2);
    CHECK(period_identity_residual(ScaledMatrix(a), 1) < 1e-12);
    CHECK(period_identity_residual(ScaledMatrix(ab), 1) < 1e-12);

    const WeightTower tower(rep);
    const std::vector<Letter> w = {1, 2};
    CHECK(period_identity_residual(tower, w, 1) < 1e-12);
    const auto rec = spectral_record(tower, w);
    CHECK(rec.jordan[0] == doctest::Approx(sl2_length(ab)).epsilon(1e-12));
    CHECK(spectral_record(tower, std::vector<Letter>{1}).jordan[0] == doctest::Approx(std::log(4.0)).epsilon(1e-14));
  }

  TEST_CASE("periods are conjugation invariant and attracting points are equivariant") {
    std::mt19937_64 rng(43);
    for (int d : {2, 3, 4}) {
      for (int trial = 0; trial < 50; ++trial) {
        const auto planted = random_proximal(d, rng, 0.5, 2.0);
        const Mat h = random_sl(d, rng, 20.0);
        const Mat conj = h * planted.matrix * Eigen::MatrixXd(h).inverse();
        const auto jg = jordan_projection(ScaledMatrix(planted.matrix));
        const auto jc = jordan_projection(ScaledMatrix(conj));
        for (int i = 0; i < d; ++i) {
          const auto s = static_cast<std::size_t>(i);
          CHECK(jc[s] == doctest::Approx(planted.jordan[s]).epsilon(1e-8));
          CHECK(jg[s] == doctest::Approx(planted.jordan[s]).epsilon(1e-8));
        }
        CHECK(period_identity_residual(ScaledMatrix(conj), 1) < 1e-8);

        const Vec v = attracting_data(ScaledMatrix(planted.matrix)).vec;
        const Vec hv = (h * v).normalized();
        const Vec vc = attracting_data(ScaledMatrix(conj)).vec;
        CHECK(std::abs(std::abs(hv.dot(vc)) - 1.0) < 1e-9);
      }
    }
  }

  TEST_CASE("class_gromov") {
    const Functional chi1 = Functional::chi(2, 1);

    // Diagonal generator: attracting e1, repelling line e2, covector e1.
    const WeightTower diag_tower(GroupRep(1, {diag({4.0, 0.25})}, {diag({0.25, 4.0})}, "diag"));
    const auto a = enumerate_classes(diag_tower.base().alphabet(), 1, ClassMode::all);
    CHECK(std::abs(class_gromov(diag_tower, a.front(), chi1)) < 1e-15);

    // At angle pi/2 the second generator inverts the first, so ab is the identity.
    const WeightTower quarter(schottky_sl2(4.0, std::numbers::pi / 2));
    const CyclicWord ab = canonical_class(free_reduce(quarter.base().alphabet(), std::vector<Letter>{1, 2}));
    CHECK(testutil::error_code_of([&] { class_gromov(quarter, ab, chi1); }) == ErrorCode::not_proximal);

    // Closed-form eigenvectors of M = [[p, q], [r, s]] with top eigenvalue mu:
    // right (q, mu - p), left (mu - s, q).
    const GroupRep eighth = schottky_sl2(4.0, std::numbers::pi / 4);
    const Mat m = eighth.generator(1) * eighth.generator(2);
    const double tr = m.trace();
    const double mu = (tr + std::copysign(std::sqrt(tr * tr - 4.0), tr)) / 2.0;
    Vec v(2), theta(2);
    v << m(0, 1), mu - m(0, 0);
    theta << mu - m(1, 1), m(0, 1);
    const double oracle = std::log(std::abs(theta.dot(v)) / (theta.norm() * v.norm()));
    const CyclicWord ab8 = canonical_class(free_reduce(eighth.alphabet(), std::vector<Letter>{1, 2}));
    CHECK(class_gromov(WeightTower(eighth), ab8, chi1) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(oracle < 0.0);
  }

  TEST_CASE("length periods of schottky classes are positive") {
    const WeightTower tower(schottky_sl2(4.0, std::numbers::pi / 4));
    const Functional length = Functional::length(2);
    for (const auto& c : enumerate_classes(tower.base().alphabet(), 8, ClassMode::all)) {
      const auto rec = spectral_record(tower, c.letters());
      CHECK(length.on_projection(rec.jordan) > 0.0);
      CHECK(rec.jordan[0] >= rec.jordan[1]);
    }
  }
}

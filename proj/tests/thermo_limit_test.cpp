#include <cmath>

#include "doctest.h"
#include "test_support.hpp"
#include "thermo/cli.hpp"
#include "thermo/error.hpp"
#include "thermo/pressure.hpp"
#include "thermo/thermo_limit.hpp"

using namespace thermo;

namespace {

constexpr double kFull2Beta2 = 0.0204763278380674;

}  // namespace

TEST_CASE("default schedule") {
  auto b = DefaultBetaSchedule();
  REQUIRE(b.size() == 81);
  CHECK(b.front() == 0.0);
  CHECK(b[3] == 1.5);
  CHECK(b.back() == 40.0);
  CHECK(DefaultBetaSchedule(0.0).size() == 1);
}

TEST_CASE("full-2-shift curve") {
  auto f2 = cli::Builtin("full2");
  auto curve = ComputeThermoCurve(f2.graph, f2.damping, f2.potential, {0.0, 2.0, 20.0, 30.0});
  CHECK(curve.values[0] == doctest::Approx(std::log(2.0)).epsilon(1e-13));
  CHECK(curve.limit_target == 0.0);
  CHECK(curve.values[1] == doctest::Approx(kFull2Beta2).epsilon(1e-12));
  CHECK(std::abs(curve.values[2]) <= 1e-8);
  auto verdict = VerifyLimit(curve, 1e-6);
  CHECK(verdict.holds);
  CHECK(verdict.diagnostic == "ok");
  auto conv = MeasureConvergence(curve);
  CHECK(std::abs(curve.eq_averages.back()) <= 1e-8);
  CHECK(conv.averages_converged);
  CHECK(conv.lower_bound_holds);
  CHECK(conv.averages_nonincreasing);
}

TEST_CASE("verdict diagnostics") {
  auto f2 = cli::Builtin("full2");
  // a == 0: constant curve, holds
  auto zero = EdgePotential::Constant(f2.graph, 0.0);
  auto flat = ComputeThermoCurve(f2.graph, zero, f2.potential, DefaultBetaSchedule(10));
  CHECK(VerifyLimit(flat, 1e-9).holds);
  for (double v : flat.values) CHECK(v == doctest::Approx(std::log(2.0)));

  auto short_curve = ComputeThermoCurve(f2.graph, f2.damping, f2.potential, DefaultBetaSchedule(5));
  auto v = VerifyLimit(short_curve, 1e-15);
  CHECK_FALSE(v.holds);
  CHECK(v.diagnostic == "limit gap");

  auto single = ComputeThermoCurve(f2.graph, f2.damping, f2.potential, DefaultBetaSchedule(0));
  CHECK(single.values.size() == 1);
  CHECK(VerifyLimit(single, 1e-6).diagnostic == "limit gap");

  // hand-corrupted curve trips the invariant checks
  auto bad = short_curve;
  bad.values[3] = bad.values[2] + 0.1;
  CHECK(VerifyLimit(bad, 1.0).diagnostic == "monotonicity");
  bad = short_curve;
  bad.values[1] = -0.1;
  CHECK(VerifyLimit(bad, 1.0).diagnostic == "sandwich lower");
  bad = short_curve;
  bad.values[0] = 1.0;
  CHECK(VerifyLimit(bad, 1.0).diagnostic == "sandwich upper");
}

TEST_CASE("input validation") {
  auto f2 = cli::Builtin("full2");
  auto neg = EdgePotential(f2.graph, {1.0, -1.0, 1.0, 0.0});
  CHECK_THROWS_WITH_AS(ComputeThermoCurve(f2.graph, neg, f2.potential, {0.0}),
                       "damping must be nonnegative", InputError);
  CHECK_THROWS_AS(ComputeThermoCurve(f2.graph, f2.damping, f2.potential, {1.0, 1.0}), InputError);
}

TEST_CASE("constant damping: averages equal c") {
  auto gm = cli::Builtin("golden-mean");
  auto c = EdgePotential::Constant(gm.graph, 0.4);
  auto curve = ComputeThermoCurve(gm.graph, c, gm.potential, DefaultBetaSchedule(10));
  CHECK(curve.a0 == doctest::Approx(0.4));
  for (double avg : curve.eq_averages) CHECK(avg == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("golden mean: averages strictly decrease to 0") {
  auto gm = cli::Builtin("golden-mean");
  auto curve = ComputeThermoCurve(gm.graph, gm.damping, gm.potential, DefaultBetaSchedule(40));
  for (std::size_t k = 1; k < curve.eq_averages.size(); ++k) {
    REQUIRE(curve.eq_averages[k] < curve.eq_averages[k - 1]);
  }
  CHECK(curve.eq_averages.back() <= 1e-6);
  CHECK(VerifyLimit(curve, 1e-6).holds);
}

TEST_CASE("gap beta search") {
  auto f2 = cli::Builtin("full2");
  auto ju = EdgePotential::Constant(f2.graph, -0.48);
  auto beta = FindGapBeta(f2.graph, f2.damping, ju, 10.0);
  REQUIRE(beta.has_value());
  CHECK(*beta <= 2.0);
  CHECK(PressureTransfer(f2.graph, ju - f2.damping * *beta).value < 0.0);
  CHECK(PressureTransfer(f2.graph, ju - f2.damping * (*beta - 1e-5)).value >= 0.0);
  CHECK(PressureTransfer(f2.graph, ju).value == doctest::Approx(std::log(2.0) - 0.48));
  CHECK(PressureTransfer(f2.graph, ju - f2.damping * 2.0).value ==
        doctest::Approx(kFull2Beta2 - 0.48).epsilon(1e-12));

  CHECK_THROWS_WITH_AS(FindGapBeta(f2.graph, f2.damping, EdgePotential::Constant(f2.graph, 0.1), 10.0),
                       doctest::Contains("Corollary hypothesis fails"), InputError);

  auto zero = EdgePotential::Constant(f2.graph, 0.0);
  auto very_neg = EdgePotential::Constant(f2.graph, -1.0);
  CHECK(FindGapBeta(f2.graph, zero, very_neg, 10.0) == 0.0);
  CHECK_FALSE(FindGapBeta(f2.graph, f2.damping, ju, 0.2).has_value());
  CHECK(*beta == doctest::Approx(0.31).epsilon(0.05));
}

TEST_CASE("random instances: sandwich, monotonicity, convexity, limit") {
  test::Rng rng(2024);
  for (int k = 0; k < 40; ++k) {
    auto inst = test::RandomDampedInstance(rng, 6);
    auto curve = ComputeThermoCurve(inst.graph, inst.a, inst.phi, DefaultBetaSchedule(40));
    auto verdict = VerifyLimit(curve, 1e-4);
    INFO("instance " << k << ": " << verdict.detail);
    CHECK(verdict.holds);
    // values + beta a0 differ from Pr(-beta a + phi) by a linear term, so
    // convexity carries over
    for (std::size_t i = 1; i + 1 < curve.values.size(); ++i) {
      REQUIRE(curve.values[i] <= 0.5 * (curve.values[i - 1] + curve.values[i + 1]) + 1e-10);
    }
    auto conv = MeasureConvergence(curve);
    CHECK(conv.averages_above_a0);
    CHECK(conv.averages_nonincreasing);
    CHECK(conv.lower_bound_holds);
  }
}

TEST_CASE("curve CSV") {
  auto f2 = cli::Builtin("full2");
  auto curve = ComputeThermoCurve(f2.graph, f2.damping, f2.potential, {0.0, 1.0});
  const std::string csv = CurveCsv(curve);
  CHECK(csv.rfind("beta,pressure_plus_beta_a0,eq_average_a,eq_entropy,limit_target\n", 0) == 0);
  CHECK(csv.find("0,0.69314718056,") != std::string::npos);
}

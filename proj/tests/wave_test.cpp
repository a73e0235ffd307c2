#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "thermo/error.hpp"
#include "thermo/wave.hpp"

using namespace thermo;
using Complex = std::complex<double>;

namespace {

double Nearest(const std::vector<Complex>& spectrum, Complex z) {
  double best = INFINITY;
  for (const Complex& t : spectrum) best = std::min(best, std::abs(t - z));
  return best;
}

WaveState Mode(const WaveSystem& s, int k) {
  WaveState st{Eigen::VectorXd(s.n_grid()), Eigen::VectorXd::Zero(s.n_grid())};
  for (int j = 0; j < s.n_grid(); ++j) st.u(j) = std::cos(k * j * s.dx());
  return st;
}

double RateFor(const std::string& profile, int n, double t_end, double t_min,
               double sample, double* two_gap) {
  auto sys = WaveSystem::Build(n, DampingProfile::Parse(profile));
  const auto spec = Spectrum(sys);
  *two_gap = 2.0 * SpectrumGap(spec);
  WaveState init = GenericInitialData(sys, 0);
  REQUIRE(SlowestModeWeight(sys, init) >= 1e-3);
  auto trace = Evolve(sys, init, t_end, 0.1 * sys.dx(), sample);
  return FitDecayRate(trace, t_min).rate;
}

}  // namespace

TEST_CASE("damping profiles") {
  auto c = DampingProfile::Parse("const:0.5");
  CHECK(c(0.0) == 0.5);
  CHECK(c(3.0) == 0.5);
  auto b = DampingProfile::Parse("bump:3,2,1");
  CHECK(b(3.0) == doctest::Approx(1.0));
  CHECK(b(2.0) == 0.0);
  CHECK(b(4.0) == 0.0);
  CHECK(b(3.5) > 0.0);
  CHECK(b(3.5) == doctest::Approx(b(2.5)));
  // circular distance
  auto wrap = DampingProfile::Parse("bump:0.1,1,1");
  CHECK(wrap(2.0 * std::numbers::pi) == doctest::Approx(wrap(0.2)));
  auto two = DampingProfile::Parse("twobump:1,1,1,4,1,0.5");
  CHECK(two(1.0) == doctest::Approx(1.0));
  CHECK(two(4.0) == doctest::Approx(0.5));
  CHECK(two.spec() == "twobump:1,1,1,4,1,0.5");
  CHECK_THROWS_AS(DampingProfile::Parse("bump:1,2"), InputError);
  CHECK_THROWS_AS(DampingProfile::Parse("const:-1"), InputError);
  CHECK_THROWS_AS(DampingProfile::Parse("gauss:1"), InputError);
  CHECK_THROWS_AS(DampingProfile::Parse("const:x"), InputError);
  CHECK_THROWS_AS(DampingProfile::Parse("bump:1,0,1"), InputError);
}

TEST_CASE("system validation") {
  CHECK_THROWS_AS(WaveSystem::Build(8, DampingProfile::Constant(0.1)), InputError);
  Eigen::VectorXd neg = Eigen::VectorXd::Constant(16, 0.1);
  neg(3) = -0.1;
  CHECK_THROWS_AS(WaveSystem{neg}, InputError);
  auto big = WaveSystem::Build(600, DampingProfile::Constant(0.1));
  CHECK_THROWS_AS(Spectrum(big), InputError);
}

TEST_CASE("constant damping: spectrum matches the dispersion relation") {
  const double c = 0.5;
  auto sys = WaveSystem::Build(256, DampingProfile::Constant(c));
  const auto spec = Spectrum(sys);
  REQUIRE(spec.size() == 512);
  const Complex i(0.0, 1.0);
  // k = 0 block: {0, -2ic}
  CHECK(Nearest(spec, 0.0) <= 1e-10);
  CHECK(Nearest(spec, -2.0 * i * c) <= 1e-8);
  for (int k = 1; k <= 128; ++k) {
    const double w = std::sqrt(sys.LaplacianSymbol(k) - c * c);
    REQUIRE(Nearest(spec, -i * c + w) <= 1e-8);
    REQUIRE(Nearest(spec, -i * c - w) <= 1e-8);
  }
  // continuum relation for the lowest modes
  for (int k = 1; k <= 3; ++k) {
    CHECK(Nearest(spec, -i * c + std::sqrt(k * k - c * c)) <= 1e-3);
  }
  CHECK(std::abs(SpectrumGap(spec) - c) <= 1e-6);
  for (const Complex& t : spec) {
    REQUIRE(t.imag() >= -2.0 * c - 1e-8);
    REQUIRE(t.imag() <= 1e-8);
  }
}

TEST_CASE("undamped spectrum is real") {
  auto sys = WaveSystem::Build(64, DampingProfile::Constant(0.0));
  const auto spec = Spectrum(sys);
  for (const Complex& t : spec) REQUIRE(std::abs(t.imag()) <= 1e-6);
  CHECK(SpectrumGap(spec) <= 1e-6);
}

TEST_CASE("bump damping: positive gap and symmetry") {
  // supported on half the circle
  auto sys = WaveSystem::Build(128, DampingProfile::Parse("bump:1.5707963267948966,3.141592653589793,1"));
  const auto spec = Spectrum(sys);
  CHECK(SpectrumGap(spec) > 0.0);
  for (const Complex& t : spec) REQUIRE(Nearest(spec, -std::conj(t)) <= 1e-8);
}

TEST_CASE("strip localization on random profiles") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const std::string spec_str =
        "twobump:" + std::to_string(6.28 * u(rng)) + "," + std::to_string(0.5 + 3 * u(rng)) + "," +
        std::to_string(2 * u(rng)) + "," + std::to_string(6.28 * u(rng)) + "," +
        std::to_string(0.5 + 3 * u(rng)) + "," + std::to_string(0.05 + 2 * u(rng));
    auto sys = WaveSystem::Build(48, DampingProfile::Parse(spec_str));
    const double amax = sys.damping().maxCoeff();
    const auto spec = Spectrum(sys);
    int near_real = 0;
    for (const Complex& t : spec) {
      REQUIRE(t.imag() >= -2.0 * amax - 1e-8);
      REQUIRE(t.imag() <= 1e-8);
      if (std::abs(t.imag()) <= 1e-10) ++near_real;
    }
    CHECK(Nearest(spec, 0.0) <= 1e-10);
    CHECK(near_real == 1);
  }
}

TEST_CASE("undamped energy is conserved at pi/2") {
  auto sys = WaveSystem::Build(4096, DampingProfile::Constant(0.0));
  WaveState st{Eigen::VectorXd(4096), Eigen::VectorXd::Zero(4096)};
  for (int j = 0; j < 4096; ++j) st.u(j) = std::sin(j * sys.dx());
  auto trace = Evolve(sys, st, 50.0, 0.5 * sys.dx(), 1.0);
  CHECK(trace.times.back() == doctest::Approx(50.0));
  for (double e : trace.energies) REQUIRE(std::abs(e - std::numbers::pi / 2) <= 1e-6);
}

TEST_CASE("single mode decays at twice the damping") {
  auto sys = WaveSystem::Build(256, DampingProfile::Constant(0.5));
  auto trace = Evolve(sys, Mode(sys, 1), 40.0, 0.1 * sys.dx(), 0.05);
  CHECK(FitDecayRate(trace, 0.0).rate == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("energy is nonincreasing with damping, zero data stays zero") {
  auto sys = WaveSystem::Build(64, DampingProfile::Parse("bump:2,2,1"));
  auto trace = Evolve(sys, GenericInitialData(sys, 3), 20.0, 0.5 * sys.dx());
  for (std::size_t k = 1; k < trace.energies.size(); ++k) {
    REQUIRE(trace.energies[k] <= trace.energies[k - 1] * (1.0 + 1e-12));
  }
  WaveState zero{Eigen::VectorXd::Zero(64), Eigen::VectorXd::Zero(64)};
  for (double e : Evolve(sys, zero, 5.0, 0.5 * sys.dx()).energies) CHECK(e == 0.0);
}

TEST_CASE("evolve preconditions") {
  auto sys = WaveSystem::Build(64, DampingProfile::Constant(0.1));
  auto init = GenericInitialData(sys, 0);
  CHECK_THROWS_AS(Evolve(sys, init, 1.0, sys.dx()), InputError);
  CHECK_THROWS_AS(Evolve(sys, init, 0.0, 0.1 * sys.dx()), InputError);
  CHECK_NOTHROW(Evolve(sys, init, 1.0, 0.9 * sys.dx()));
}

TEST_CASE("decay fit") {
  EnergyTrace synthetic;
  for (int k = 0; k <= 100; ++k) {
    synthetic.times.push_back(0.1 * k);
    synthetic.energies.push_back(3.0 * std::exp(-0.8 * 0.1 * k));
  }
  CHECK(std::abs(FitDecayRate(synthetic, 0.0).rate - 0.8) <= 1e-10);
  CHECK_FALSE(FitDecayRate(synthetic, 0.0).floor_limited);

  auto sys = WaveSystem::Build(64, DampingProfile::Constant(0.0));
  auto flat = Evolve(sys, GenericInitialData(sys, 1), 20.0, 0.5 * sys.dx(), 0.1);
  CHECK(std::abs(FitDecayRate(flat, 0.0).rate) <= 1e-6);

  EnergyTrace floored = synthetic;
  floored.energies[80] = 0.0;
  auto fit = FitDecayRate(floored, 0.0);
  CHECK(fit.floor_limited);
  CHECK(fit.points == 80);
  CHECK_THROWS_AS(FitDecayRate(synthetic, 100.0), InputError);
}

TEST_CASE("fitted rate matches twice the gap for generic data") {
  double two_gap = 0.0;
  const double constant = RateFor("const:0.5", 64, 60.0, 20.0, 0.05, &two_gap);
  CHECK(two_gap == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(constant - two_gap) <= 0.05 * two_gap);

  const double bump = RateFor("bump:3,2,1", 32, 4000.0, 1000.0, 1.0, &two_gap);
  CHECK(std::abs(bump - two_gap) <= 0.05 * two_gap);

  const double twin = RateFor("twobump:1,1.5,1,4,1.5,0.5", 32, 600.0, 200.0, 0.5, &two_gap);
  CHECK(std::abs(twin - two_gap) <= 0.05 * two_gap);
}

TEST_CASE("CSV output") {
  std::vector<Complex> spec = {{0.0, 0.0}, {1.5, -0.25}};
  CHECK(SpectrumCsv(spec) == "re_tau,im_tau\n0,0\n1.5,-0.25\n");
  EnergyTrace t{{0.0, 0.5}, {2.0, 1.0}};
  CHECK(EnergyCsv(t) == "t,E\n0,2\n0.5,1\n");
}

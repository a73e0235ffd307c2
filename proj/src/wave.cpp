#include "thermo/wave.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include "thermo/error.hpp"
#include "thermo/format.hpp"

namespace thermo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEnergyFloor = 1e-300;
constexpr double kGrowthTolerance = 1e-6;
constexpr double kZeroEigenvalue = 1e-10;
// rounding in the (energy-free) mean of u shows up as gradient energy of
// this relative size late in long runs
constexpr double kRoundoffFloor = 1e-14;

std::vector<double> ParseNumbers(std::string_view text, std::string_view spec) {
  std::vector<double> out;
  std::string buf(text);
  std::stringstream in(buf);
  std::string item;
  while (std::getline(in, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size() || !std::isfinite(v)) {
      throw InputError("bad number '" + item + "' in damping profile '" +
                       std::string(spec) + "'");
    }
    out.push_back(v);
  }
  return out;
}

double CircularDistance(double x, double y) {
  double d = std::fmod(std::abs(x - y), kTwoPi);
  return std::min(d, kTwoPi - d);
}

}  // namespace

// ---------------------------------------------------------------------------
// DampingProfile

DampingProfile DampingProfile::Constant(double c) {
  if (c < 0.0) throw InputError("damping must be nonnegative");
  DampingProfile p;
  p.spec_ = "const:" + FormatNumber(c);
  p.constant_ = c;
  return p;
}

DampingProfile DampingProfile::Parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw InputError("damping profile '" + std::string(spec) +
                     "' needs the form kind:params");
  }
  const std::string_view kind = spec.substr(0, colon);
  const std::vector<double> args = ParseNumbers(spec.substr(colon + 1), spec);
  DampingProfile p;
  p.spec_ = std::string(spec);
  if (kind == "const") {
    if (args.size() != 1) throw InputError("const profile takes one value");
    p.constant_ = args[0];
  } else if (kind == "bump" || kind == "twobump") {
    const std::size_t want = kind == "bump" ? 3 : 6;
    if (args.size() != want) {
      throw InputError(std::string(kind) + " profile takes " +
                       std::to_string(want) + " values");
    }
    for (std::size_t k = 0; k < want; k += 3) {
      if (!(args[k + 1] > 0.0)) throw InputError("bump width must be positive");
      p.bumps_.push_back({args[k], args[k + 1], args[k + 2]});
    }
  } else {
    throw InputError("unknown damping profile kind '" + std::string(kind) + "'");
  }
  if (p.constant_ < 0.0 ||
      std::any_of(p.bumps_.begin(), p.bumps_.end(),
                  [](const Bump& b) { return b.height < 0.0; })) {
    throw InputError("damping must be nonnegative");
  }
  return p;
}

double DampingProfile::operator()(double x) const {
  double a = constant_;
  for (const Bump& b : bumps_) {
    const double r = 2.0 * CircularDistance(x, b.center) / b.width;
    if (r < 1.0) a += b.height * std::exp(1.0 - 1.0 / (1.0 - r * r));
  }
  return a;
}

// ---------------------------------------------------------------------------
// WaveSystem

WaveSystem::WaveSystem(Eigen::VectorXd damping) : damping_(std::move(damping)) {
  if (damping_.size() < kMinGrid) {
    throw InputError("wave grid needs at least " + std::to_string(kMinGrid) +
                     " points");
  }
  if (damping_.minCoeff() < 0.0) throw InputError("damping must be nonnegative");
  dx_ = kTwoPi / static_cast<double>(damping_.size());
}

WaveSystem WaveSystem::Build(int n_grid, const DampingProfile& profile) {
  if (n_grid < kMinGrid) {
    throw InputError("wave grid needs at least " + std::to_string(kMinGrid) +
                     " points");
  }
  Eigen::VectorXd a(n_grid);
  const double dx = kTwoPi / n_grid;
  for (int j = 0; j < n_grid; ++j) a(j) = profile(j * dx);
  return WaveSystem(std::move(a));
}

Eigen::MatrixXd WaveSystem::Generator() const {
  const int n = n_grid();
  const double inv = 1.0 / (dx_ * dx_);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    g(j, n + j) = 1.0;
    g(n + j, j) += -2.0 * inv;
    g(n + j, (j + 1) % n) += inv;
    g(n + j, (j + n - 1) % n) += inv;
    g(n + j, n + j) = -2.0 * damping_(j);
  }
  return g;
}

Eigen::VectorXd WaveSystem::ApplyLaplacian(const Eigen::VectorXd& u) const {
  const int n = n_grid();
  const double inv = 1.0 / (dx_ * dx_);
  Eigen::VectorXd out(n);
  for (int j = 0; j < n; ++j) {
    out(j) = (u((j + 1) % n) - 2.0 * u(j) + u((j + n - 1) % n)) * inv;
  }
  return out;
}

double WaveSystem::LaplacianSymbol(int k) const {
  const double s = std::sin(0.5 * k * dx_);
  return 4.0 * s * s / (dx_ * dx_);
}

// ---------------------------------------------------------------------------
// Spectrum

std::vector<std::complex<double>> Spectrum(const WaveSystem& system) {
  if (system.n_grid() > kMaxDenseGrid) {
    throw InputError("dense spectrum limited to n_grid <= " +
                     std::to_string(kMaxDenseGrid));
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(system.Generator(), false);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigensolver failed on the wave generator");
  }
  std::vector<std::complex<double>> taus;
  const std::complex<double> i(0.0, 1.0);
  for (const auto& mu : solver.eigenvalues()) taus.push_back(i * mu);
  std::sort(taus.begin(), taus.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return taus;
}

double SpectrumGap(std::span<const std::complex<double>> spectrum) {
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& tau : spectrum) {
    if (std::abs(tau) > kZeroEigenvalue) gap = std::min(gap, std::abs(tau.imag()));
  }
  return gap;
}

// ---------------------------------------------------------------------------
// Evolution

double Energy(const WaveSystem& system, const WaveState& state) {
  const int n = system.n_grid();
  const double dx = system.dx();
  double grad = 0.0;
  for (int j = 0; j < n; ++j) {
    const double d = (state.u((j + 1) % n) - state.u(j)) / dx;
    grad += d * d;
  }
  return 0.5 * (grad + state.v.squaredNorm()) * dx;
}

EnergyTrace Evolve(const WaveSystem& system, const WaveState& initial,
                   double t_end, double dt, double sample_interval) {
  const int n = system.n_grid();
  if (initial.u.size() != n || initial.v.size() != n) {
    throw InputError("initial data does not match the grid");
  }
  if (!(t_end > 0.0)) throw InputError("t_end must be positive");
  if (!(dt > 0.0) || dt > 0.9 * system.dx()) {
    throw InputError("dt = " + FormatNumber(dt) + " violates dt <= 0.9 dx = " +
                     FormatNumber(0.9 * system.dx()));
  }
  const long steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  const long stride =
      sample_interval > 0.0
          ? std::max(1L, static_cast<long>(std::llround(sample_interval / dt)))
          : 1L;

  // (I - dt^2/4 Lap + dt A) v' = (I + dt^2/4 Lap - dt A) v + dt Lap u
  const double inv = 1.0 / (system.dx() * system.dx());
  const double q = 0.25 * dt * dt * inv;
  std::vector<Eigen::Triplet<double>> entries;
  for (int j = 0; j < n; ++j) {
    entries.emplace_back(j, j, 1.0 + 2.0 * q + dt * system.damping()(j));
    entries.emplace_back(j, (j + 1) % n, -q);
    entries.emplace_back(j, (j + n - 1) % n, -q);
  }
  Eigen::SparseMatrix<double> lhs(n, n);
  lhs.setFromTriplets(entries.begin(), entries.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(lhs);
  if (solver.info() != Eigen::Success) {
    throw NumericError("factorization of the implicit step failed");
  }

  WaveState state = initial;
  EnergyTrace trace;
  double energy = Energy(system, state);
  const double rounding = kRoundoffFloor * energy;
  trace.times.push_back(0.0);
  trace.energies.push_back(energy);
  const Eigen::ArrayXd damp_dt = dt * system.damping().array();
  for (long step = 1; step <= steps; ++step) {
    const Eigen::VectorXd lap_u = system.ApplyLaplacian(state.u);
    const Eigen::VectorXd lap_v = system.ApplyLaplacian(state.v);
    const Eigen::VectorXd rhs = (state.v + 0.25 * dt * dt * lap_v).array() -
                                damp_dt * state.v.array() +
                                dt * lap_u.array();
    Eigen::VectorXd v_next = solver.solve(rhs);
    state.u += 0.5 * dt * (state.v + v_next);
    state.v = std::move(v_next);
    const double next = Energy(system, state);
    if (next > energy * (1.0 + kGrowthTolerance) + rounding) {
      throw NumericError("energy grew from " + FormatNumber(energy) + " to " +
                         FormatNumber(next) + " at step " +
                         std::to_string(step));
    }
    energy = next;
    if (step % stride == 0 || step == steps) {
      trace.times.push_back(step * dt);
      trace.energies.push_back(energy);
    }
  }
  return trace;
}

DecayFit FitDecayRate(const EnergyTrace& trace, double t_min) {
  DecayFit fit;
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    if (trace.times[k] < t_min) continue;
    if (!(trace.energies[k] > kEnergyFloor)) {
      fit.floor_limited = true;
      break;
    }
    const double t = trace.times[k];
    const double y = std::log(trace.energies[k]);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
    ++fit.points;
  }
  if (fit.points < 2) {
    throw InputError("decay fit needs at least two positive energies after t_min");
  }
  const double m = fit.points;
  const double denom = m * stt - st * st;
  if (!(denom > 0.0)) throw InputError("decay fit window has no time spread");
  fit.rate = -(m * sty - st * sy) / denom;
  return fit;
}

// ---------------------------------------------------------------------------
// Initial data and modal analysis

WaveState GenericInitialData(const WaveSystem& system, std::uint64_t seed) {
  const int n = system.n_grid();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  WaveState state{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  for (int k = 0; k <= n / 2; ++k) {
    const double amp = 1.0 / (1.0 + k);
    const double uc = normal(rng) * amp, us = normal(rng) * amp;
    const double vc = normal(rng) * amp, vs = normal(rng) * amp;
    for (int j = 0; j < n; ++j) {
      const double x = j * system.dx();
      const double c = std::cos(k * x), s = std::sin(k * x);
      state.u(j) += uc * c + us * s;
      state.v(j) += vc * c + vs * s;
    }
  }
  return state;
}

double SlowestModeWeight(const WaveSystem& system, const WaveState& initial) {
  if (system.n_grid() > kMaxDenseGrid) {
    throw InputError("modal analysis limited to n_grid <= " +
                     std::to_string(kMaxDenseGrid));
  }
  const int n = system.n_grid();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(system.Generator(), true);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigensolver failed on the wave generator");
  }
  const Eigen::MatrixXcd& modes = solver.eigenvectors();
  Eigen::VectorXcd x0(2 * n);
  x0.head(n) = initial.u.cast<std::complex<double>>();
  x0.tail(n) = initial.v.cast<std::complex<double>>();
  const Eigen::VectorXcd coeff = modes.partialPivLu().solve(x0);
  const auto& mu = solver.eigenvalues();
  double slowest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < mu.size(); ++k) {
    if (std::abs(mu(k)) > kZeroEigenvalue) slowest = std::min(slowest, -mu(k).real());
  }
  const double norm = x0.norm();
  double weight = 0.0;
  for (int k = 0; k < mu.size(); ++k) {
    if (std::abs(mu(k)) <= kZeroEigenvalue) continue;
    if (std::abs(-mu(k).real() - slowest) > 1e-8 * std::max(1.0, slowest)) continue;
    weight = std::max(weight, std::abs(coeff(k)) * modes.col(k).norm() / norm);
  }
  return weight;
}

std::string SpectrumCsv(std::span<const std::complex<double>> spectrum) {
  std::ostringstream out;
  out << "re_tau,im_tau\n";
  for (const auto& tau : spectrum) {
    out << FormatNumber(tau.real()) << ',' << FormatNumber(tau.imag()) << '\n';
  }
  return out.str();
}

std::string EnergyCsv(const EnergyTrace& trace) {
  std::ostringstream out;
  out << "t,E\n";
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    out << FormatNumber(trace.times[k]) << ',' << FormatNumber(trace.energies[k])
        << '\n';
  }
  return out.str();
}

}  // namespace thermo

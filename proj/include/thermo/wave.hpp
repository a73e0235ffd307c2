#ifndef THERMO_WAVE_HPP
#define THERMO_WAVE_HPP

// Damped wave equation u_tt - u_xx + 2 a(x) u_t = 0 on the circle of length
// 2 pi, discretized with second-order central differences.
//
// The circle satisfies geometric control for any nonzero damping, so this
// module only exercises the spectral objects (generator, strip, gap, energy
// decay), not the negative-curvature setting.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace thermo {

/// Dense eigensolves are limited to this grid size (matrix 2n x 2n).
inline constexpr int kMaxDenseGrid = 512;
inline constexpr int kMinGrid = 16;

/// Parsed from `const:c`, `bump:center,width,height` or
/// `twobump:c1,w1,h1,c2,w2,h2`. A bump is height * exp(1 - 1/(1 - r^2)) with
/// r = 2 d / width, d the circular distance to the center.
class DampingProfile {
 public:
  static DampingProfile Parse(std::string_view spec);
  static DampingProfile Constant(double c);

  double operator()(double x) const;
  const std::string& spec() const { return spec_; }

 private:
  struct Bump {
    double center, width, height;
  };
  std::string spec_;
  double constant_ = 0.0;
  std::vector<Bump> bumps_;
};

class WaveSystem {
 public:
  /// Damping samples at x_j = j * 2pi / n. Throws InputError for n < 16 or
  /// negative entries.
  explicit WaveSystem(Eigen::VectorXd damping);
  static WaveSystem Build(int n_grid, const DampingProfile& profile);

  int n_grid() const { return static_cast<int>(damping_.size()); }
  double dx() const { return dx_; }
  const Eigen::VectorXd& damping() const { return damping_; }

  /// Real first-order generator G with d/dt (u, u_t) = G (u, u_t):
  /// G = [[0, I], [Lap, -2 diag(a)]]. Modes e^{-i tau t} of the wave operator
  /// correspond to eigenvalues mu = -i tau of G.
  Eigen::MatrixXd Generator() const;
  Eigen::VectorXd ApplyLaplacian(const Eigen::VectorXd& u) const;
  /// Eigenvalue of -Lap on the Fourier mode e^{ikx}: (4/dx^2) sin^2(k dx/2).
  double LaplacianSymbol(int k) const;

 private:
  Eigen::VectorXd damping_;
  double dx_ = 0.0;
};

/// tau = i mu over the eigenvalues mu of the generator, sorted by (Re, Im).
/// Throws InputError above kMaxDenseGrid.
std::vector<std::complex<double>> Spectrum(const WaveSystem& system);

/// min |Im tau| over eigenvalues with |tau| > 1e-10.
double SpectrumGap(std::span<const std::complex<double>> spectrum);

struct WaveState {
  Eigen::VectorXd u;
  Eigen::VectorXd v;  // u_t
};

/// E = (1/2)(||u_x||^2 + ||u_t||^2), periodic trapezoid rule with forward
/// differences for u_x.
double Energy(const WaveSystem& system, const WaveState& state);

struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> energies;
};

/// Implicit-midpoint integration (symplectic without damping, exactly
/// energy-conserving for a = 0, exactly dissipative for a >= 0). Samples at
/// t = 0 and every `sample_interval` (rounded to whole steps; 0 means every
/// step). Requires dt <= 0.9 dx and t_end > 0; throws NumericError if the
/// energy grows by more than 1e-6 relative in a step (plus a 1e-14 E(0)
/// rounding floor).
EnergyTrace Evolve(const WaveSystem& system, const WaveState& initial,
                   double t_end, double dt, double sample_interval = 0.0);

struct DecayFit {
  double rate = 0.0;
  /// Samples below 1e-300 were met and the window was cut before them.
  bool floor_limited = false;
  int points = 0;
};

/// Least-squares slope of log E(t) on [t_min, t_end], returned as -slope.
DecayFit FitDecayRate(const EnergyTrace& trace, double t_min);

/// Random data on every grid Fourier mode 0..n/2, amplitudes 1/(1+k) times
/// standard normals.
WaveState GenericInitialData(const WaveSystem& system, std::uint64_t seed);

/// Relative weight |c| ||V_k|| / ||x0|| of the slowest-decaying nonzero mode
/// in the eigen-expansion of the initial data (largest over ties).
double SlowestModeWeight(const WaveSystem& system, const WaveState& initial);

/// Columns: re_tau, im_tau.
std::string SpectrumCsv(std::span<const std::complex<double>> spectrum);
/// Columns: t, E.
std::string EnergyCsv(const EnergyTrace& trace);

}  // namespace thermo

#endif  // THERMO_WAVE_HPP

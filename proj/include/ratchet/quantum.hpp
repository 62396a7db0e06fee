#pragma once

// Split-operator propagation of the kicked-ratchet quantum map
//   U = exp(-i hbar (k + beta)^2 / 2) exp(-i P (sin x + alpha sin 2x))
// on a truncated integer momentum ladder, plus the observables built on it.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratchet/model.hpp"

namespace ratchet {

namespace detail {
class FourierPair;
}

using Complex = std::complex<double>;

/// Population above which the two outermost ladder sites signal aliasing.
inline constexpr double kAliasingThreshold = 1e-8;

/// Thrown when an evolution pushes population to the edge of the momentum ladder.
class AliasingError : public std::runtime_error {
 public:
  AliasingError(std::size_t kick, double edge_population, std::size_t m_max);
  std::size_t kick() const { return kick_; }
  double edge_population() const { return edge_population_; }

 private:
  std::size_t kick_;
  double edge_population_;
};

/// Amplitudes c_m on the ladder m + beta, m in [-m_max, m_max], stored in
/// ascending m.
class QuantumState {
 public:
  QuantumState(Grid grid, double beta, std::vector<Complex> amplitudes);

  const Grid& grid() const { return grid_; }
  double beta() const { return beta_; }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  std::span<Complex> amplitudes() { return amplitudes_; }
  Complex amplitude(long m) const { return amplitudes_[grid_.index_of(m)]; }

  double norm() const;
  /// |c_{-m_max}|^2 + |c_{+m_max}|^2.
  double edge_population() const;

 private:
  Grid grid_;
  double beta_;
  std::vector<Complex> amplitudes_;
};

/// Spatially uniform state c_m = delta_{m,0}; beta in [0, 1).
QuantumState init_uniform(const Grid& grid, double beta);

/// Plane wave with wavenumber k0 (any real): ladder offset frac(k0), occupied
/// site floor(k0).
QuantumState init_plane_wave(const Grid& grid, double k0);

QuantumState apply_kick(const QuantumState& state, const ModelParams& params);
QuantumState apply_free(const QuantumState& state, const ModelParams& params);
/// One kick period: kick first, then free flight.
QuantumState step(const QuantumState& state, const ModelParams& params);

/// Dense N x N kick matrix <m| exp(-i P f(x)) |m'> from direct N-node
/// quadrature. Row-major, N <= 512.
std::vector<Complex> dense_kick_matrix(const Grid& grid, const ModelParams& params);
inline constexpr std::size_t kDenseOracleMaxSize = 512;
/// Explicit matrix-vector realisation of step, independent of the FFT path.
QuantumState dense_oracle_step(const QuantumState& state, const ModelParams& params);

/// <k> = sum (m + beta) |c_m|^2.
double current(const QuantumState& state);
/// (hbar^2 / 2) sum (m + beta)^2 |c_m|^2.
double energy(const QuantumState& state, const ModelParams& params);

/// Precomputed kick and free-flight factors for repeated in-place stepping.
class KickedMap {
 public:
  KickedMap(const Grid& grid, const ModelParams& params, double beta);
  ~KickedMap();
  KickedMap(KickedMap&&) noexcept;
  KickedMap& operator=(KickedMap&&) noexcept;

  void kick(QuantumState& state);
  void free(QuantumState& state) const;
  void step(QuantumState& state) {
    kick(state);
    free(state);
  }

 private:
  void check(const QuantumState& state) const;

  Grid grid_;
  double beta_;
  std::shared_ptr<const detail::FourierPair> fourier_;
  std::vector<Complex> kick_factor_;
  std::vector<Complex> free_factor_;
  std::vector<Complex> work_;
};

struct CurrentSample {
  std::size_t l = 0;
  double mean_k = 0.0;
  double norm = 0.0;
  double energy = 0.0;
};

using CurrentSeries = std::vector<CurrentSample>;

/// Iterates the map from `initial`, recording l = 0, record_every, 2 record_every, ...
/// and always l_max. Throws AliasingError naming the offending kick.
CurrentSeries evolve_from(QuantumState initial, const ModelParams& params, std::size_t l_max,
                          std::size_t record_every = 1);

/// evolve_from(init_uniform(grid, beta), ...).
CurrentSeries evolve(const ModelParams& params, const Grid& grid, double beta, std::size_t l_max,
                     std::size_t record_every = 1);

/// Incoherent weighted average over independent quasi-momentum ladders. Each
/// beta is the initial wavenumber of a plane wave (see init_plane_wave), so
/// beta in [0, 1) reproduces evolve exactly.
CurrentSeries quasimomentum_average(const ModelParams& params, const Grid& grid, std::span<const double> betas,
                                    std::span<const double> weights, std::size_t l_max,
                                    std::size_t record_every = 1, unsigned threads = 1);

struct BetaEnsemble {
  std::vector<double> betas;
  std::vector<double> weights;
};

/// `count` equally spaced wavenumbers over [-3 sigma, 3 sigma] with normalised
/// Gaussian weights. sigma == 0 gives the single member beta = 0.
BetaEnsemble gaussian_beta_ensemble(double sigma, std::size_t count);

}  // namespace ratchet

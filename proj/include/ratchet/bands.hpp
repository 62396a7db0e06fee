#pragma once

// Static Bloch bands of H = -(1/2) d^2/dx^2 + depth (sin x + alpha sin 2x) in a
// plane-wave basis e^{i(m + beta)x}, and the count of bands lying below the
// potential barrier.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace ratchet {

class CutoffError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultBandCutoff = 128;
inline constexpr std::size_t kDefaultBetaSamples = 33;
inline constexpr double kCutoffTolerance = 1e-8;

/// Hermitian matrix over m in [-m_max, m_max], ascending m. m_max >= 8.
Eigen::MatrixXcd build_bloch_hamiltonian(double depth, double alpha, double beta, std::size_t m_max);

/// Ascending eigenvalues of build_bloch_hamiltonian.
Eigen::VectorXd bloch_eigenvalues(double depth, double alpha, double beta, std::size_t m_max);

struct BlochSpectrum {
  std::vector<double> beta_samples;
  /// energies(b, n) = E_n(beta_b), ascending in n.
  Eigen::MatrixXd energies;

  std::size_t band_count() const { return static_cast<std::size_t>(energies.cols()); }
  double band_max(std::size_t n) const { return energies.col(static_cast<Eigen::Index>(n)).maxCoeff(); }
  double band_min(std::size_t n) const { return energies.col(static_cast<Eigen::Index>(n)).minCoeff(); }
};

/// Uniform samples beta_b = b / (2 (count - 1)) covering [0, 1/2] inclusive.
std::vector<double> uniform_beta_samples(std::size_t count);

/// Throws CutoffError when doubling m_max moves any of the lowest n_bands
/// eigenvalues at beta = 0 by more than kCutoffTolerance.
void check_band_cutoff(double depth, double alpha, std::size_t n_bands, std::size_t m_max);

BlochSpectrum band_energies(double depth, double alpha, std::size_t n_bands,
                            std::size_t beta_samples = kDefaultBetaSamples, std::size_t m_max = kDefaultBandCutoff,
                            unsigned threads = 1);

struct BandCountReport {
  double depth = 0.0;
  double barrier = 0.0;
  std::size_t n_below = 0;
};

/// Bands whose maximum over the beta samples lies strictly below the barrier.
BandCountReport count_bands_below_barrier(double depth, double alpha, std::size_t m_max = kDefaultBandCutoff,
                                          std::size_t beta_samples = kDefaultBetaSamples, unsigned threads = 1);

struct ScalingFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
};

/// Least-squares fit of log n vs log depth over the non-zero counts; at least
/// three are required.
ScalingFit fit_power_law(std::span<const double> depths, std::span<const std::size_t> counts);

struct ScalingReport {
  std::vector<BandCountReport> counts;
  ScalingFit fit;
};

ScalingReport fit_sqrt_scaling(std::span<const double> depths, double alpha, std::size_t m_max = kDefaultBandCutoff,
                               std::size_t beta_samples = kDefaultBetaSamples, unsigned threads = 1);

}  // namespace ratchet

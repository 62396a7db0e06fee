#include "ratchet/bands.hpp"

#include <algorithm>
#include <cmath>

#include "ratchet/fit.hpp"
#include "ratchet/model.hpp"
#include "ratchet/parallel.hpp"

namespace ratchet {

Eigen::MatrixXcd build_bloch_hamiltonian(double depth, double alpha, double beta, std::size_t m_max) {
  if (m_max < 8) throw std::invalid_argument("plane-wave cutoff m_max must be at least 8");
  const auto n = static_cast<Eigen::Index>(2 * m_max + 1);
  const auto offset = static_cast<double>(m_max);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  const std::complex<double> first(0.0, -0.5 * depth);           // <m+1| depth sin x |m>
  const std::complex<double> second(0.0, -0.5 * depth * alpha);  // <m+2| depth alpha sin 2x |m>
  for (Eigen::Index i = 0; i < n; ++i) {
    const double k = static_cast<double>(i) - offset + beta;
    h(i, i) = 0.5 * k * k;
    if (i + 1 < n) {
      h(i + 1, i) = first;
      h(i, i + 1) = std::conj(first);
    }
    if (i + 2 < n) {
      h(i + 2, i) = second;
      h(i, i + 2) = std::conj(second);
    }
  }
  return h;
}

Eigen::VectorXd bloch_eigenvalues(double depth, double alpha, double beta, std::size_t m_max) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(build_bloch_hamiltonian(depth, alpha, beta, m_max),
                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("Bloch eigensolver did not converge");
  return solver.eigenvalues();
}

std::vector<double> uniform_beta_samples(std::size_t count) {
  if (count == 0) throw std::invalid_argument("need at least one quasi-momentum sample");
  if (count == 1) return {0.0};
  // E(beta) = E(-beta) for a real potential, so [0, 1/2] covers the zone and
  // includes both band edges.
  std::vector<double> betas(count);
  for (std::size_t b = 0; b < count; ++b) betas[b] = 0.5 * static_cast<double>(b) / static_cast<double>(count - 1);
  return betas;
}

void check_band_cutoff(double depth, double alpha, std::size_t n_bands, std::size_t m_max) {
  const Eigen::VectorXd coarse = bloch_eigenvalues(depth, alpha, 0.0, m_max);
  const Eigen::VectorXd fine = bloch_eigenvalues(depth, alpha, 0.0, 2 * m_max);
  const auto n = std::min<Eigen::Index>(static_cast<Eigen::Index>(n_bands), coarse.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(coarse(i) - fine(i)) > kCutoffTolerance) {
      throw CutoffError("plane-wave cutoff m_max=" + std::to_string(m_max) + " too small: band " +
                        std::to_string(i + 1) + " moves by " + std::to_string(std::abs(coarse(i) - fine(i))) +
                        " when the basis is doubled");
    }
  }
}

BlochSpectrum band_energies(double depth, double alpha, std::size_t n_bands, std::size_t beta_samples,
                            std::size_t m_max, unsigned threads) {
  if (n_bands == 0 || n_bands > 2 * m_max) throw std::invalid_argument("n_bands must lie in [1, 2 m_max]");
  check_band_cutoff(depth, alpha, n_bands, m_max);

  BlochSpectrum spectrum;
  spectrum.beta_samples = uniform_beta_samples(beta_samples);
  spectrum.energies.resize(static_cast<Eigen::Index>(beta_samples), static_cast<Eigen::Index>(n_bands));
  parallel_for(beta_samples, threads, [&](std::size_t b) {
    const Eigen::VectorXd e = bloch_eigenvalues(depth, alpha, spectrum.beta_samples[b], m_max);
    spectrum.energies.row(static_cast<Eigen::Index>(b)) = e.head(static_cast<Eigen::Index>(n_bands)).transpose();
  });
  return spectrum;
}

BandCountReport count_bands_below_barrier(double depth, double alpha, std::size_t m_max, std::size_t beta_samples,
                                          unsigned threads) {
  BandCountReport report;
  report.depth = depth;
  report.barrier = barrier_height(depth, alpha);

  const auto betas = uniform_beta_samples(beta_samples);
  const auto n = static_cast<Eigen::Index>(2 * m_max + 1);
  std::vector<Eigen::VectorXd> spectra(beta_samples);
  parallel_for(beta_samples, threads,
               [&](std::size_t b) { spectra[b] = bloch_eigenvalues(depth, alpha, betas[b], m_max); });

  // E_n(beta) <= E_{n+1}(beta) pointwise, so band maxima are ordered too.
  Eigen::Index below = 0;
  while (below < n) {
    double band_max = spectra.front()(below);
    for (const auto& e : spectra) band_max = std::max(band_max, e(below));
    if (!(band_max < report.barrier)) break;
    ++below;
  }
  check_band_cutoff(depth, alpha, static_cast<std::size_t>(below) + 1, m_max);
  report.n_below = static_cast<std::size_t>(below);
  return report;
}

ScalingFit fit_power_law(std::span<const double> depths, std::span<const std::size_t> counts) {
  if (depths.size() != counts.size()) throw std::invalid_argument("depths and counts differ in length");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (counts[i] == 0) continue;
    if (!(depths[i] > 0.0)) throw std::invalid_argument("power-law fit needs positive depths");
    lx.push_back(std::log(depths[i]));
    ly.push_back(std::log(static_cast<double>(counts[i])));
  }
  if (lx.size() < 3) throw std::invalid_argument("power-law fit needs at least 3 non-zero band counts");
  const LinearFit line = fit_line(lx, ly);
  return {line.slope, std::exp(line.intercept), line.r_squared};
}

ScalingReport fit_sqrt_scaling(std::span<const double> depths, double alpha, std::size_t m_max,
                               std::size_t beta_samples, unsigned threads) {
  ScalingReport report;
  std::vector<std::size_t> n;
  for (double depth : depths) {
    report.counts.push_back(count_bands_below_barrier(depth, alpha, m_max, beta_samples, threads));
    n.push_back(report.counts.back().n_below);
  }
  report.fit = fit_power_law(depths, n);
  return report;
}

}  // namespace ratchet

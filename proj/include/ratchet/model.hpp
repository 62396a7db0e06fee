#pragma once

// Shared parameter types of the delta-kicked ratchet: the kick potential,
// effective Planck constant helpers and the rational resonance classifier.

#include <cstddef>
#include <optional>
#include <string>

namespace ratchet {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Physical knobs of the kicked ratchet in scaled units (L = T = 1).
///
/// The kick imprints the phase P * (sin x + alpha sin 2x) with P = K / hbar_eff.
/// Construct through the named factories so that K and P stay consistent.
class ModelParams {
 public:
  /// From the kick phase amplitude P (the quantity varied in the figures).
  static ModelParams from_kick_phase(double P, double alpha, double hbar_eff);
  /// From the classical kick strength K.
  static ModelParams from_kick_strength(double K, double alpha, double hbar_eff);

  double K() const { return K_; }
  double alpha() const { return alpha_; }
  double hbar_eff() const { return hbar_; }
  double P() const { return P_; }

  ModelParams with_hbar(double hbar_eff) const { return from_kick_phase(P_, alpha_, hbar_eff); }
  ModelParams with_P(double P) const { return from_kick_phase(P, alpha_, hbar_); }

 private:
  ModelParams(double K, double alpha, double hbar, double P)
      : K_(K), alpha_(alpha), hbar_(hbar), P_(P) {}

  double K_;
  double alpha_;
  double hbar_;
  double P_;
};

/// Symmetric integer momentum ladder m in [-m_max, m_max] and its N = 2 m_max + 1
/// position nodes x_j = 2 pi j / N.
class Grid {
 public:
  explicit Grid(std::size_t m_max);

  /// m_max = max(512, ceil(1.1 (1 + 2|alpha|) P l_max)): the kick force is
  /// bounded by (1 + 2|alpha|) per unit P, which caps ballistic growth.
  static Grid for_evolution(double P, double alpha, std::size_t l_max);

  std::size_t m_max() const { return m_max_; }
  std::size_t size() const { return 2 * m_max_ + 1; }
  long momentum(std::size_t index) const { return static_cast<long>(index) - static_cast<long>(m_max_); }
  std::size_t index_of(long m) const { return static_cast<std::size_t>(m + static_cast<long>(m_max_)); }
  double node(std::size_t j) const { return kTwoPi * static_cast<double>(j) / static_cast<double>(size()); }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t m_max_;
};

/// sin x + alpha sin 2x, the K-stripped ratchet potential.
double potential_shape(double x, double alpha);

/// Maximum over one period of depth * potential_shape(x, alpha).
double barrier_height(double depth, double alpha);

/// hbar_eff = 8 omega_R T.
double hbar_from_physical(double omega_R, double T);

/// Reduced (r, s) with hbar_eff = 4 pi r / s, or NonResonant.
struct ResonanceLabel {
  long r = 0;
  long s = 0;

  static ResonanceLabel non_resonant() { return {}; }
  static ResonanceLabel resonant(long r, long s) { return {r, s}; }

  bool is_resonant() const { return s > 0; }
  double hbar() const { return 4.0 * kPi * static_cast<double>(r) / static_cast<double>(s); }
  std::string to_string() const;

  bool operator==(const ResonanceLabel&) const = default;
};

inline constexpr long kDefaultMaxDenominator = 100;
inline constexpr double kDefaultResonanceTolerance = 1e-9;

/// Walks the continued-fraction convergents of hbar_eff / (4 pi) and returns the
/// first with denominator <= s_max lying within tol_abs of hbar_eff.
ResonanceLabel classify_resonance(double hbar_eff, long s_max = kDefaultMaxDenominator,
                                  double tol_abs = kDefaultResonanceTolerance);

}  // namespace ratchet

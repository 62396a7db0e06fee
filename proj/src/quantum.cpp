#include "ratchet/quantum.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "fourier.hpp"
#include "ratchet/parallel.hpp"

namespace ratchet {

namespace {

std::string aliasing_message(std::size_t kick, double edge, std::size_t m_max) {
  std::ostringstream os;
  os << "aliasing guard tripped at kick " << kick << ": edge population " << edge << " exceeds "
     << kAliasingThreshold << " on a ladder with m_max=" << m_max;
  return os.str();
}

double free_phase(double hbar, double k) { return 0.5 * hbar * k * k; }

}  // namespace

AliasingError::AliasingError(std::size_t kick, double edge_population, std::size_t m_max)
    : std::runtime_error(aliasing_message(kick, edge_population, m_max)),
      kick_(kick),
      edge_population_(edge_population) {}

QuantumState::QuantumState(Grid grid, double beta, std::vector<Complex> amplitudes)
    : grid_(grid), beta_(beta), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != grid_.size()) throw std::invalid_argument("amplitude count does not match the grid");
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("quasi-momentum beta must lie in [0, 1)");
}

double QuantumState::norm() const {
  double sum = 0.0;
  for (const Complex& c : amplitudes_) sum += std::norm(c);
  return sum;
}

double QuantumState::edge_population() const {
  return std::norm(amplitudes_.front()) + std::norm(amplitudes_.back());
}

QuantumState init_uniform(const Grid& grid, double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("quasi-momentum beta must lie in [0, 1)");
  std::vector<Complex> c(grid.size());
  c[grid.index_of(0)] = 1.0;
  return QuantumState(grid, beta, std::move(c));
}

QuantumState init_plane_wave(const Grid& grid, double k0) {
  const double site = std::floor(k0);
  const double beta = k0 - site;
  if (std::abs(site) >= static_cast<double>(grid.m_max())) throw std::invalid_argument("initial wavenumber outside the ladder");
  std::vector<Complex> c(grid.size());
  c[grid.index_of(static_cast<long>(site))] = 1.0;
  return QuantumState(grid, beta, std::move(c));
}

KickedMap::KickedMap(const Grid& grid, const ModelParams& params, double beta)
    : grid_(grid), beta_(beta), fourier_(detail::FourierPair::for_size(grid.size())) {
  const std::size_t n = grid.size();
  kick_factor_.resize(n);
  free_factor_.resize(n);
  work_.resize(n);
  // The unitary 1/sqrt(N) of each transform direction is folded into the kick
  // table; the ascending-m storage order needs no reshuffle since the
  // e^{-i m_max x_j} offsets of the two directions cancel.
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    kick_factor_[j] = std::polar(scale, -params.P() * potential_shape(grid.node(j), params.alpha()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double k = static_cast<double>(grid.momentum(i)) + beta;
    free_factor_[i] = std::polar(1.0, -free_phase(params.hbar_eff(), k));
  }
}

KickedMap::~KickedMap() = default;
KickedMap::KickedMap(KickedMap&&) noexcept = default;
KickedMap& KickedMap::operator=(KickedMap&&) noexcept = default;

void KickedMap::check(const QuantumState& state) const {
  if (!(state.grid() == grid_)) throw std::invalid_argument("state grid does not match the map");
  if (state.beta() != beta_) throw std::invalid_argument("state quasi-momentum does not match the map");
}

void KickedMap::kick(QuantumState& state) {
  check(state);
  auto c = state.amplitudes();
  fourier_->synthesize(c, work_);
  for (std::size_t j = 0; j < work_.size(); ++j) work_[j] *= kick_factor_[j];
  fourier_->analyze(work_, c);
}

void KickedMap::free(QuantumState& state) const {
  check(state);
  auto c = state.amplitudes();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= free_factor_[i];
}

QuantumState apply_kick(const QuantumState& state, const ModelParams& params) {
  QuantumState out = state;
  KickedMap(state.grid(), params, state.beta()).kick(out);
  return out;
}

QuantumState apply_free(const QuantumState& state, const ModelParams& params) {
  QuantumState out = state;
  KickedMap(state.grid(), params, state.beta()).free(out);
  return out;
}

QuantumState step(const QuantumState& state, const ModelParams& params) {
  QuantumState out = state;
  KickedMap(state.grid(), params, state.beta()).step(out);
  return out;
}

std::vector<Complex> dense_kick_matrix(const Grid& grid, const ModelParams& params) {
  const std::size_t n = grid.size();
  if (n > kDenseOracleMaxSize) throw std::invalid_argument("grid too large for the dense oracle");

  std::vector<Complex> kick(n);
  for (std::size_t j = 0; j < n; ++j) {
    kick[j] = std::polar(1.0, -params.P() * potential_shape(grid.node(j), params.alpha()));
  }

  const long size = static_cast<long>(n);
  std::vector<Complex> matrix(n * n);
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t col = 0; col < n; ++col) {
      const long d = grid.momentum(row) - grid.momentum(col);
      Complex sum = 0.0;
      for (long j = 0; j < size; ++j) {
        const long turns = ((d * j) % size + size) % size;
        sum += kick[static_cast<std::size_t>(j)] * std::polar(1.0, -kTwoPi * static_cast<double>(turns) / static_cast<double>(size));
      }
      matrix[row * n + col] = sum / static_cast<double>(size);
    }
  }
  return matrix;
}

QuantumState dense_oracle_step(const QuantumState& state, const ModelParams& params) {
  const Grid& grid = state.grid();
  const std::size_t n = grid.size();
  const auto matrix = dense_kick_matrix(grid, params);
  const auto in = state.amplitudes();
  std::vector<Complex> out(n);
  for (std::size_t row = 0; row < n; ++row) {
    Complex sum = 0.0;
    for (std::size_t col = 0; col < n; ++col) sum += matrix[row * n + col] * in[col];
    const double k = static_cast<double>(grid.momentum(row)) + state.beta();
    out[row] = sum * std::polar(1.0, -free_phase(params.hbar_eff(), k));
  }
  return QuantumState(grid, state.beta(), std::move(out));
}

double current(const QuantumState& state) {
  const auto c = state.amplitudes();
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    sum += (static_cast<double>(state.grid().momentum(i)) + state.beta()) * std::norm(c[i]);
  }
  return sum;
}

double energy(const QuantumState& state, const ModelParams& params) {
  const auto c = state.amplitudes();
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double k = static_cast<double>(state.grid().momentum(i)) + state.beta();
    sum += k * k * std::norm(c[i]);
  }
  return 0.5 * params.hbar_eff() * params.hbar_eff() * sum;
}

CurrentSeries evolve_from(QuantumState state, const ModelParams& params, std::size_t l_max, std::size_t record_every) {
  if (l_max < 1) throw std::invalid_argument("kick count must be at least 1");
  if (record_every < 1) throw std::invalid_argument("record interval must be at least 1");

  KickedMap map(state.grid(), params, state.beta());
  CurrentSeries series;
  series.reserve(l_max / record_every + 2);
  const auto record = [&](std::size_t l) { series.push_back({l, current(state), state.norm(), energy(state, params)}); };

  record(0);
  for (std::size_t l = 1; l <= l_max; ++l) {
    map.step(state);
    const double edge = state.edge_population();
    if (!(edge < kAliasingThreshold)) throw AliasingError(l, edge, state.grid().m_max());
    if (l % record_every == 0 || l == l_max) record(l);
  }
  return series;
}

CurrentSeries evolve(const ModelParams& params, const Grid& grid, double beta, std::size_t l_max,
                     std::size_t record_every) {
  return evolve_from(init_uniform(grid, beta), params, l_max, record_every);
}

CurrentSeries quasimomentum_average(const ModelParams& params, const Grid& grid, std::span<const double> betas,
                                    std::span<const double> weights, std::size_t l_max, std::size_t record_every,
                                    unsigned threads) {
  if (betas.size() != weights.size()) throw std::invalid_argument("betas and weights differ in length");
  if (betas.empty()) throw std::invalid_argument("empty quasi-momentum ensemble");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("quasi-momentum weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("quasi-momentum weights must sum to 1");

  std::vector<CurrentSeries> members(betas.size());
  parallel_for(betas.size(), threads, [&](std::size_t i) {
    members[i] = evolve_from(init_plane_wave(grid, betas[i]), params, l_max, record_every);
  });

  CurrentSeries average = members.front();
  for (auto& sample : average) sample.mean_k = sample.norm = sample.energy = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t e = 0; e < average.size(); ++e) {
      average[e].mean_k += weights[i] * members[i][e].mean_k;
      average[e].norm += weights[i] * members[i][e].norm;
      average[e].energy += weights[i] * members[i][e].energy;
    }
  }
  return average;
}

BetaEnsemble gaussian_beta_ensemble(double sigma, std::size_t count) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("quasi-momentum spread must be non-negative");
  if (sigma == 0.0 || count <= 1) return {{0.0}, {1.0}};
  BetaEnsemble ensemble;
  const double half_width = 3.0 * sigma;
  double total = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double beta = -half_width + 2.0 * half_width * static_cast<double>(i) / static_cast<double>(count - 1);
    const double w = std::exp(-0.5 * beta * beta / (sigma * sigma));
    ensemble.betas.push_back(beta);
    ensemble.weights.push_back(w);
    total += w;
  }
  for (double& w : ensemble.weights) w /= total;
  return ensemble;
}

}  // namespace ratchet

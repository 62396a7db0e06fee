#include "fourier.hpp"

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace ratchet::detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

fftw_complex* as_fftw(const std::complex<double>* p) {
  // FFTW takes non-const input pointers but does not write to them for
  // out-of-place complex transforms.
  return reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(p));
}

}  // namespace

FourierPair::FourierPair(std::size_t n) : n_(n) {
  std::vector<std::complex<double>> a(n), b(n);
  const int size = static_cast<int>(n);
  // FFTW_UNALIGNED keeps the chosen codelets independent of buffer alignment,
  // so any caller buffer produces bit-identical output.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  backward_ = fftw_plan_dft_1d(size, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
  forward_ = fftw_plan_dft_1d(size, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
  if (backward_ == nullptr || forward_ == nullptr) throw std::runtime_error("FFTW planning failed");
}

FourierPair::~FourierPair() {
  std::lock_guard lock(planner_mutex());
  if (backward_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(backward_));
  if (forward_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
}

std::shared_ptr<const FourierPair> FourierPair::for_size(std::size_t n) {
  if (n == 0) throw std::invalid_argument("transform size must be positive");
  std::lock_guard lock(planner_mutex());
  static std::map<std::size_t, std::shared_ptr<const FourierPair>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  // The planner mutex is already held; construct directly.
  std::shared_ptr<const FourierPair> plan(new FourierPair(n));
  cache.emplace(n, plan);
  return plan;
}

void FourierPair::synthesize(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
  if (in.size() != n_ || out.size() != n_) throw std::invalid_argument("transform size mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(backward_), as_fftw(in.data()), as_fftw(out.data()));
}

void FourierPair::analyze(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
  if (in.size() != n_ || out.size() != n_) throw std::invalid_argument("transform size mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(forward_), as_fftw(in.data()), as_fftw(out.data()));
}

}  // namespace ratchet::detail

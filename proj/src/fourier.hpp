#pragma once

// Thin owner of FFTW plans for the N-point discrete Fourier pair used by the
// propagator. Plans are created once per size behind a mutex; execution goes
// through the new-array interface and is safe from any thread.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace ratchet::detail {

class FourierPair {
 public:
  /// Cached plan pair for size n.
  static std::shared_ptr<const FourierPair> for_size(std::size_t n);

  ~FourierPair();
  FourierPair(const FourierPair&) = delete;
  FourierPair& operator=(const FourierPair&) = delete;

  std::size_t size() const { return n_; }

  /// out_j = sum_k in_k exp(+2 pi i j k / n), unnormalized.
  void synthesize(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
  /// out_k = sum_j in_j exp(-2 pi i j k / n), unnormalized.
  void analyze(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

 private:
  explicit FourierPair(std::size_t n);

  std::size_t n_;
  void* backward_ = nullptr;
  void* forward_ = nullptr;
};

}  // namespace ratchet::detail

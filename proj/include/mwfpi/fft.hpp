#pragma once

#include <cstddef>
#include <memory>
#include <span>

#include "mwfpi/core_model.hpp"

namespace mwfpi {

/// In-place complex DFT of fixed length backed by FFTW. Plans are created
/// under a global lock; execution is reentrant.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::size_t size() const { return n_; }
  /// X_m = sum_n x_n exp(-2 pi i m n / N)
  void forward(std::span<cplx> data) const;
  /// Unnormalized inverse: x_n = sum_m X_m exp(+2 pi i m n / N)
  void backward(std::span<cplx> data) const;

 private:
  std::size_t n_;
  void* forward_ = nullptr;
  void* backward_ = nullptr;
};

/// Shared, cached plan for length n.
std::shared_ptr<const FftPlan> fft_plan(std::size_t n);

}  // namespace mwfpi

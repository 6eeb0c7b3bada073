#include "mwfpi/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

namespace mwfpi {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  std::vector<cplx> scratch(n);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const int len = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_ = fftw_plan_dft_1d(len, buf, buf, FFTW_FORWARD, flags);
  backward_ = fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, flags);
  if (forward_ == nullptr || backward_ == nullptr) {
    throw Error(ErrorKind::InvalidParameter, "FFTW could not create a plan");
  }
}

FftPlan::~FftPlan() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_));
}

void FftPlan::forward(std::span<cplx> data) const {
  if (data.size() != n_) throw Error(ErrorKind::GridMismatch, "FFT length mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_), p, p);
}

void FftPlan::backward(std::span<cplx> data) const {
  if (data.size() != n_) throw Error(ErrorKind::GridMismatch, "FFT length mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(backward_), p, p);
}

std::shared_ptr<const FftPlan> fft_plan(std::size_t n) {
  static std::mutex cache_mutex;
  static std::map<std::size_t, std::shared_ptr<const FftPlan>> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto plan = std::make_shared<const FftPlan>(n);
  cache.emplace(n, plan);
  return plan;
}

}  // namespace mwfpi

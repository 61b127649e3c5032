#include "phasespace/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace phasespace::fft {
namespace {

// (length, howmany, stride, dist, sign)
using PlanKey = std::tuple<int, int, int, int, int>;

class PlanCache {
 public:
  ~PlanCache() {
    std::lock_guard lock(mutex_);
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(const PlanKey& key) {
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const auto [length, howmany, stride, dist, sign] = key;
    // The planner may scribble on its buffer; plan against scratch memory and
    // execute later with fftw_execute_dft on the caller's data.
    const std::size_t extent = static_cast<std::size_t>(stride) * (length - 1) +
                               static_cast<std::size_t>(dist) * (howmany - 1) + 1;
    std::vector<Complex> scratch(extent);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    int n[] = {length};
    fftw_plan plan = fftw_plan_many_dft(1, n, howmany, buf, nullptr, stride, dist, buf, nullptr,
                                        stride, dist, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void execute(Complex* data, int length, int howmany, int stride, int dist, int sign) {
  if (length <= 1 || howmany == 0) return;
  fftw_plan plan = cache().get({length, howmany, stride, dist, sign});
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void forward(std::span<Complex> data) {
  execute(data.data(), static_cast<int>(data.size()), 1, 1, 1, FFTW_FORWARD);
}

void backward(std::span<Complex> data) {
  execute(data.data(), static_cast<int>(data.size()), 1, 1, 1, FFTW_BACKWARD);
}

void forward_rows(RowMajorMatrix& m) {
  const int cols = static_cast<int>(m.cols());
  execute(m.data(), cols, static_cast<int>(m.rows()), 1, cols, FFTW_FORWARD);
}

void backward_rows(RowMajorMatrix& m) {
  const int cols = static_cast<int>(m.cols());
  execute(m.data(), cols, static_cast<int>(m.rows()), 1, cols, FFTW_BACKWARD);
}

void forward_cols(RowMajorMatrix& m) {
  const int cols = static_cast<int>(m.cols());
  execute(m.data(), static_cast<int>(m.rows()), cols, cols, 1, FFTW_FORWARD);
}

void backward_cols(RowMajorMatrix& m) {
  const int cols = static_cast<int>(m.cols());
  execute(m.data(), static_cast<int>(m.rows()), cols, cols, 1, FFTW_BACKWARD);
}

std::vector<double> angular_frequencies(std::size_t n, double spacing) {
  std::vector<double> omega(n);
  const double unit = 2.0 * std::numbers::pi / (static_cast<double>(n) * spacing);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<long>(i) - (i >= n / 2 ? static_cast<long>(n) : 0L);
    omega[i] = unit * static_cast<double>(k);
  }
  return omega;
}

}  // namespace phasespace::fft

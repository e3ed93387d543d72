#include "wrfrft/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace wrfrft::fft {
namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex);
    auto it = plans.find({n, sign});
    if (it != plans.end()) return it->second;
    // Planning needs scratch buffers; ESTIMATE never touches their contents.
    std::vector<cdouble> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf,
                                      sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans.emplace(std::pair{n, sign}, plan);
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void transform(std::span<cdouble> data, int sign) {
  if (data.size() < 2) return;
  fftw_plan plan = cache().get(data.size(), sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

void centered_dft(std::span<cdouble> data, int sign) {
  const std::size_t n = data.size();
  if (n == 0) return;
  const double c = 0.5 * static_cast<double>(n - 1);
  const double w = sign * 2.0 * M_PI / static_cast<double>(n);
  // exp(s j w (k-c)(m-c)) = exp(s j w k m) exp(-s j w c m) exp(-s j w c k) exp(s j w c^2)
  for (std::size_t m = 0; m < n; ++m) data[m] *= std::polar(1.0, -w * c * static_cast<double>(m));
  transform(data, sign);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k)
    data[k] *= std::polar(norm, w * (c * c - c * static_cast<double>(k)));
}

}  // namespace wrfrft::fft

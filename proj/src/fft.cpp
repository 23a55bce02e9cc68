#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "kgfield/spectral.hpp"

namespace kgfield {
namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<int, int, int, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  fftw_plan get(const std::array<int, 3>& shape, int sign) {
    std::lock_guard<std::mutex> lock(mutex);
    const auto key = std::make_tuple(shape[0], shape[1], shape[2], sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    const std::size_t n = static_cast<std::size_t>(shape[0]) * shape[1] * shape[2];
    auto* buf = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_3d(shape[0], shape[1], shape[2], buf, buf, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (!plan) throw NumericalError("FFTW planning failed");
    plans.emplace(key, plan);
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void run(CGrid& data, const std::array<int, 3>& shape, int sign) {
  const std::size_t n = static_cast<std::size_t>(shape[0]) * shape[1] * shape[2];
  if (data.size() != n) throw PreconditionError("fft: grid size does not match shape");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(cache().get(shape, sign), p, p);
}

} // namespace

void fft_forward(CGrid& data, const std::array<int, 3>& shape) { run(data, shape, FFTW_FORWARD); }
void fft_backward(CGrid& data, const std::array<int, 3>& shape) { run(data, shape, FFTW_BACKWARD); }

} // namespace kgfield

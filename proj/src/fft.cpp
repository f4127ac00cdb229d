#include "burgulence/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>

#include "burgulence/error.hpp"

namespace burgulence {

// FFTW's planner is not thread-safe; plan creation and destruction go through this mutex.
namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealFft::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;

  explicit Plans(std::size_t n) {
    RealBuffer r(n);
    ComplexBuffer c(n / 2 + 1);
    auto* cptr = reinterpret_cast<fftw_complex*>(c.data());
    std::lock_guard lock(planner_mutex());
    forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), r.data(), cptr, FFTW_ESTIMATE);
    inverse = fftw_plan_dft_c2r_1d(static_cast<int>(n), cptr, r.data(), FFTW_ESTIMATE);
    if (!forward || !inverse) fail(ErrorKind::internal, "FFTW plan creation failed");
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(inverse);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;
};

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

RealFft::RealFft(std::size_t n) : n_(n) {
  require(n >= 2 && n % 2 == 0, ErrorKind::domain, "FFT length must be even and >= 2");
  plans_ = shared_plans(n);
  real_.resize(n);
  spectral_.resize(n / 2 + 1);
}

RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

void RealFft::forward(std::span<const double> in, std::span<Complex> out) {
  require(in.size() == n_ && out.size() == spectral_size(), ErrorKind::internal,
          "RealFft::forward size mismatch");
  std::copy(in.begin(), in.end(), real_.begin());
  fftw_execute_dft_r2c(plans_->forward, real_.data(),
                       reinterpret_cast<fftw_complex*>(spectral_.data()));
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t k = 0; k < spectral_.size(); ++k) out[k] = spectral_[k] * scale;
}

void RealFft::inverse(std::span<const Complex> in, std::span<double> out) {
  require(in.size() == spectral_size() && out.size() == n_, ErrorKind::internal,
          "RealFft::inverse size mismatch");
  // c2r overwrites its input, hence the copy into scratch.
  std::copy(in.begin(), in.end(), spectral_.begin());
  fftw_execute_dft_c2r(plans_->inverse, reinterpret_cast<fftw_complex*>(spectral_.data()),
                       real_.data());
  std::copy(real_.begin(), real_.end(), out.begin());
}

std::shared_ptr<const RealFft::Plans> RealFft::shared_plans(std::size_t n) {
  static std::mutex cache_mutex;
  static std::map<std::size_t, std::weak_ptr<const RealFft::Plans>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[n];
  if (auto existing = slot.lock()) return existing;
  auto created = std::make_shared<const RealFft::Plans>(n);
  slot = created;
  return created;
}

}  // namespace burgulence

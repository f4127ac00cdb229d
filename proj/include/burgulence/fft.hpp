#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <new>
#include <span>
#include <vector>

namespace burgulence {

/// 64-byte aligned allocator so buffers always match the alignment FFTW planned for.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t alignment{64};

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), alignment));
  }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, alignment); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept {
    return true;
  }
};

using Complex = std::complex<double>;
using RealBuffer = std::vector<double, AlignedAllocator<double>>;
using ComplexBuffer = std::vector<Complex, AlignedAllocator<Complex>>;

/// Real-to-complex transform of length n under the convention
///   c[k] = (1/n) sum_j u[j] exp(-2 pi i k j / n),  k = 0..n/2,
/// i.e. c[k] approximates the Fourier integral of u over [0,1).
///
/// Plans are created with FFTW_ESTIMATE (deterministic plan selection) and shared
/// between instances of the same size. Each instance owns scratch buffers, so a
/// single instance must not be used from two threads at once.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return n_; }
  std::size_t spectral_size() const noexcept { return n_ / 2 + 1; }

  /// `out` must hold n/2+1 entries.
  void forward(std::span<const double> in, std::span<Complex> out);
  /// `in` holds n/2+1 coefficients; `out` receives n samples.
  void inverse(std::span<const Complex> in, std::span<double> out);

 private:
  struct Plans;
  static std::shared_ptr<const Plans> shared_plans(std::size_t n);

  std::size_t n_ = 0;
  std::shared_ptr<const Plans> plans_;
  RealBuffer real_;
  ComplexBuffer spectral_;
};

bool is_power_of_two(std::size_t n) noexcept;

}  // namespace burgulence

#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "burgulence/fft.hpp"

namespace burgulence {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Zero-mean real function on S^1 = R/Z, held both as samples on the uniform grid
/// x_j = j/n and as Fourier coefficients u^(k) = int u(x) exp(-2 pi i k x) dx for
/// k = 0..n/2 (negative modes follow from conjugate symmetry).
///
/// Fields are immutable values; every operation returns a new field.
class PeriodicField {
 public:
  /// Subtracts the discrete mean. Size must be a power of two >= 16 and all
  /// samples finite.
  static PeriodicField from_samples(std::span<const double> samples);
  /// `coefficients` holds k = 0..n/2; the mean mode is forced to zero and the
  /// Nyquist mode to a real value.
  static PeriodicField from_coefficients(std::size_t n, std::span<const Complex> coefficients);
  static PeriodicField zero(std::size_t n);

  std::size_t size() const noexcept { return samples_.size(); }
  double spacing() const noexcept { return 1.0 / static_cast<double>(size()); }
  double grid_point(std::size_t j) const noexcept {
    return static_cast<double>(j) / static_cast<double>(size());
  }

  std::span<const double> samples() const noexcept { return samples_; }
  std::span<const Complex> coefficients() const noexcept { return coefficients_; }
  /// Signed mode access, |k| <= n/2.
  Complex coefficient(long k) const;

  double max_abs() const noexcept;
  /// Fraction of sum |u^(k)|^2 carried by modes with |k| > n/3.
  double top_band_energy_fraction() const noexcept;
  /// Set on derivatives of fields whose top-third spectral energy exceeds 1e-6.
  bool resolution_warning() const noexcept { return resolution_warning_; }

 private:
  PeriodicField(std::vector<double> samples, std::vector<Complex> coefficients)
      : samples_(std::move(samples)), coefficients_(std::move(coefficients)) {}

  friend PeriodicField derivative(const PeriodicField& field, int m);

  std::vector<double> samples_;
  std::vector<Complex> coefficients_;
  bool resolution_warning_ = false;
};

/// Thread-local transform of size n, reused across calls.
RealFft& thread_fft(std::size_t n);

/// Samples fn on the uniform grid of size n (no mean removal).
std::vector<double> sample_function(std::size_t n, const std::function<double(double)>& fn);

PeriodicField project_zero_mean(std::span<const double> samples);

/// Spectral interpolation onto a grid of size n (zero padding or truncation).
PeriodicField resample(const PeriodicField& field, std::size_t n);

/// m-th spectral derivative, 1 <= m <= 4. The Nyquist mode is dropped for odd m.
PeriodicField derivative(const PeriodicField& field, int m);

/// |d^m v/dx^m|_p by rectangle-rule quadrature on the grid; p = infinity gives the
/// grid maximum. Requires p >= 1.
double norm_wmp(const PeriodicField& field, int m, double p);
/// ||v||_m computed from the coefficients (Parseval).
double norm_h_parseval(const PeriodicField& field, int m);

/// Nearest grid multiple j/n of ell with 1 <= j <= n.
double snap_to_grid(double ell, std::size_t n);
/// Converts a grid-aligned ell into a sample shift; non-grid values are a domain error.
std::size_t grid_shift(double ell, std::size_t n);

/// (1/n) sum_j |u(x_j + ell) - u(x_j)|^p with ell a grid multiple, p >= 0 (0^0 = 1).
double increment_moment(const PeriodicField& field, double ell, double p);
/// (1/n) sum_j (u(x_j + ell) - u(x_j))^+.
double positive_part_increment(const PeriodicField& field, double ell);

/// |x|^p with fast paths for the exponents the diagnostics use.
double abs_pow(double x, double p) noexcept;

}  // namespace burgulence

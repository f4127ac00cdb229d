#include "burgulence/field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "burgulence/error.hpp"

namespace burgulence {

namespace {

void check_grid_size(std::size_t n) {
  if (n < 16 || !is_power_of_two(n)) {
    std::ostringstream msg;
    msg << "grid size " << n << " is not a power of two >= 16";
    fail(ErrorKind::domain, msg.str());
  }
}

std::vector<double> inverse_transform(std::size_t n, std::span<const Complex> coefficients) {
  std::vector<double> samples(n);
  thread_fft(n).inverse(coefficients, samples);
  return samples;
}

}  // namespace

RealFft& thread_fft(std::size_t n) {
  thread_local std::map<std::size_t, RealFft> transforms;
  auto it = transforms.find(n);
  if (it == transforms.end()) it = transforms.emplace(n, RealFft(n)).first;
  return it->second;
}

std::vector<double> sample_function(std::size_t n, const std::function<double(double)>& fn) {
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = fn(static_cast<double>(j) / static_cast<double>(n));
  return out;
}

PeriodicField PeriodicField::from_samples(std::span<const double> samples) {
  const std::size_t n = samples.size();
  check_grid_size(n);
  for (double v : samples) {
    require(std::isfinite(v), ErrorKind::numerical_input, "field samples must be finite");
  }
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
  std::vector<double> centred(samples.begin(), samples.end());
  for (double& v : centred) v -= mean;
  std::vector<Complex> coefficients(n / 2 + 1);
  thread_fft(n).forward(centred, coefficients);
  coefficients[0] = 0.0;
  return {std::move(centred), std::move(coefficients)};
}

PeriodicField PeriodicField::from_coefficients(std::size_t n, std::span<const Complex> coefficients) {
  check_grid_size(n);
  require(coefficients.size() == n / 2 + 1, ErrorKind::internal,
          "coefficient array must hold n/2+1 modes");
  std::vector<Complex> c(coefficients.begin(), coefficients.end());
  c[0] = 0.0;
  c[n / 2] = c[n / 2].real();
  for (const Complex& z : c) {
    require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorKind::numerical_input,
            "field coefficients must be finite");
  }
  auto samples = inverse_transform(n, c);
  return {std::move(samples), std::move(c)};
}

PeriodicField PeriodicField::zero(std::size_t n) {
  check_grid_size(n);
  return {std::vector<double>(n, 0.0), std::vector<Complex>(n / 2 + 1, 0.0)};
}

Complex PeriodicField::coefficient(long k) const {
  const long half = static_cast<long>(size() / 2);
  require(k >= -half && k <= half, ErrorKind::domain, "mode index outside |k| <= n/2");
  if (k >= 0) return coefficients_[static_cast<std::size_t>(k)];
  return std::conj(coefficients_[static_cast<std::size_t>(-k)]);
}

double PeriodicField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

double PeriodicField::top_band_energy_fraction() const noexcept {
  const std::size_t n = size();
  double total = 0.0;
  double top = 0.0;
  for (std::size_t k = 1; k < coefficients_.size(); ++k) {
    const double weight = (k == n / 2) ? 1.0 : 2.0;
    const double e = weight * std::norm(coefficients_[k]);
    total += e;
    if (3 * k > n) top += e;
  }
  return total > 0.0 ? top / total : 0.0;
}

PeriodicField project_zero_mean(std::span<const double> samples) {
  return PeriodicField::from_samples(samples);
}

PeriodicField resample(const PeriodicField& field, std::size_t n) {
  check_grid_size(n);
  if (n == field.size()) return field;
  std::vector<Complex> c(n / 2 + 1, 0.0);
  const std::size_t shared = std::min(field.size(), n) / 2;
  auto src = field.coefficients();
  for (std::size_t k = 1; k <= shared; ++k) c[k] = src[k];
  // An old Nyquist mode splits evenly between +k and -k on a finer grid.
  if (n > field.size()) c[field.size() / 2] *= 0.5;
  return PeriodicField::from_coefficients(n, c);
}

PeriodicField derivative(const PeriodicField& field, int m) {
  require(m >= 1 && m <= 4, ErrorKind::domain, "derivative order must be in 1..4");
  const std::size_t n = field.size();
  auto src = field.coefficients();
  std::vector<Complex> c(src.size());
  for (std::size_t k = 0; k < src.size(); ++k) {
    const Complex factor = std::pow(Complex(0.0, 2.0 * pi * static_cast<double>(k)), m);
    c[k] = src[k] * factor;
  }
  if (m % 2 == 1) c[n / 2] = 0.0;
  auto out = PeriodicField::from_coefficients(n, c);
  out.resolution_warning_ = field.top_band_energy_fraction() > 1e-6;
  return out;
}

double norm_wmp(const PeriodicField& field, int m, double p) {
  require(p >= 1.0, ErrorKind::domain, "norm_wmp requires p >= 1");
  require(m >= 0, ErrorKind::domain, "norm_wmp requires m >= 0");
  if (m == 0) {
    auto s = field.samples();
    if (std::isinf(p)) return field.max_abs();
    double acc = 0.0;
    for (double v : s) acc += abs_pow(v, p);
    acc /= static_cast<double>(s.size());
    if (p == 1.0) return acc;
    if (p == 2.0) return std::sqrt(acc);
    return std::pow(acc, 1.0 / p);
  }
  return norm_wmp(derivative(field, m), 0, p);
}

double norm_h_parseval(const PeriodicField& field, int m) {
  require(m >= 0, ErrorKind::domain, "norm_h_parseval requires m >= 0");
  const std::size_t n = field.size();
  auto c = field.coefficients();
  double acc = 0.0;
  for (std::size_t k = 1; k < c.size(); ++k) {
    if (k == n / 2 && m % 2 == 1) continue;  // matches the spectral derivative
    const double weight = (k == n / 2) ? 1.0 : 2.0;
    acc += weight * std::norm(c[k]) * std::pow(2.0 * pi * static_cast<double>(k), 2 * m);
  }
  return std::sqrt(acc);
}

double snap_to_grid(double ell, std::size_t n) {
  const double nd = static_cast<double>(n);
  double j = std::round(ell * nd);
  j = std::clamp(j, 1.0, nd);
  return j / nd;
}

std::size_t grid_shift(double ell, std::size_t n) {
  require(ell > 0.0 && ell <= 1.0, ErrorKind::domain, "increment length must lie in (0, 1]");
  const double scaled = ell * static_cast<double>(n);
  const double j = std::round(scaled);
  if (std::abs(scaled - j) > 1e-8 * std::max(1.0, scaled)) {
    std::ostringstream msg;
    msg << "increment length " << ell << " is not a multiple of 1/" << n;
    fail(ErrorKind::domain, msg.str());
  }
  return static_cast<std::size_t>(j) % n;
}

double abs_pow(double x, double p) noexcept {
  const double a = std::abs(x);
  if (p == 2.0) return a * a;
  if (p == 1.0) return a;
  if (p == 4.0) return (a * a) * (a * a);
  if (p == 3.0) return a * a * a;
  if (p == 0.5) return std::sqrt(a);
  if (p == 0.0) return 1.0;
  return std::pow(a, p);
}

double increment_moment(const PeriodicField& field, double ell, double p) {
  require(p >= 0.0, ErrorKind::domain, "increment moment requires p >= 0");
  const std::size_t n = field.size();
  const std::size_t shift = grid_shift(ell, n);
  auto u = field.samples();
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t js = j + shift;
    if (js >= n) js -= n;
    acc += abs_pow(u[js] - u[j], p);
  }
  return acc / static_cast<double>(n);
}

double positive_part_increment(const PeriodicField& field, double ell) {
  const std::size_t n = field.size();
  const std::size_t shift = grid_shift(ell, n);
  auto u = field.samples();
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t js = j + shift;
    if (js >= n) js -= n;
    acc += std::max(u[js] - u[j], 0.0);
  }
  return acc / static_cast<double>(n);
}

}  // namespace burgulence

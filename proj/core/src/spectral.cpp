#include "acslab/spectral.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <fftw3.h>

namespace acslab {
namespace {

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::shared_ptr<const Spectral> Spectral::get(const GridChart& chart) {
  static std::mutex cache_mutex;
  static std::map<std::pair<int, std::array<double, 4>>, std::shared_ptr<const Spectral>> cache;
  std::lock_guard lock(cache_mutex);
  auto key = std::make_pair(chart.resolution, chart.periods);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto created = std::make_shared<const Spectral>(chart);
  cache.emplace(key, created);
  return created;
}

Spectral::Spectral(const GridChart& chart) : chart_(chart) {
  chart_.validate();
  const int n = chart_.resolution;
  const int half = n / 2 + 1;
  spectrum_size_ = static_cast<std::size_t>(n) * n * n * half;
  for (auto& w : wavenumber_) w.resize(spectrum_size_);
  for (auto& m : mode_) m.resize(spectrum_size_);
  laplacian_.resize(spectrum_size_);
  nyquist_.resize(spectrum_size_);

  auto signed_mode = [n](int i) { return i <= n / 2 ? i : i - n; };
  std::size_t s = 0;
  for (int i0 = 0; i0 < n; ++i0) {
    for (int i1 = 0; i1 < n; ++i1) {
      for (int i2 = 0; i2 < n; ++i2) {
        for (int i3 = 0; i3 < half; ++i3, ++s) {
          const std::array<int, 4> k{signed_mode(i0), signed_mode(i1), signed_mode(i2), i3};
          bool nyq = false;
          double lap = 0.0;
          for (int a = 0; a < 4; ++a) {
            mode_[a][s] = k[a];
            const bool axis_nyq = std::abs(k[a]) == n / 2;
            nyq = nyq || axis_nyq;
            const double w = axis_nyq ? 0.0 : 2.0 * std::numbers::pi * k[a] / chart_.periods[a];
            wavenumber_[a][s] = w;
            lap += w * w;
          }
          nyquist_[s] = nyq ? 1 : 0;
          laplacian_[s] = lap;
        }
      }
    }
  }

  std::lock_guard lock(plan_mutex());
  std::vector<double> real(chart_.points());
  std::vector<std::complex<double>> cplx(spectrum_size_);
  auto* out = reinterpret_cast<fftw_complex*>(cplx.data());
  const int dims[4] = {n, n, n, n};
  forward_plan_ = fftw_plan_dft_r2c(4, dims, real.data(), out, FFTW_ESTIMATE | FFTW_UNALIGNED);
  inverse_plan_ = fftw_plan_dft_c2r(4, dims, out, real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
}

Spectral::~Spectral() {
  std::lock_guard lock(plan_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

Spectral::Spectrum Spectral::forward(const Eigen::VectorXd& f) const {
  Spectrum out(spectrum_size_);
  Eigen::VectorXd in = f;
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

Eigen::VectorXd Spectral::inverse(Spectrum s) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(chart_.points()));
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(s.data()), out.data());
  out /= static_cast<double>(chart_.points());
  return out;
}

std::array<int, 4> Spectral::mode(std::size_t s) const {
  return {mode_[0][s], mode_[1][s], mode_[2][s], mode_[3][s]};
}

Eigen::VectorXd Spectral::derivative(const Eigen::VectorXd& f, int axis) const {
  Spectrum s = forward(f);
  for (std::size_t i = 0; i < spectrum_size_; ++i) s[i] *= derivative_symbol(i, axis);
  return inverse(std::move(s));
}

std::array<Eigen::VectorXd, 4> Spectral::gradient(const Eigen::VectorXd& f) const {
  const Spectrum base = forward(f);
  std::array<Eigen::VectorXd, 4> out;
  for (int a = 0; a < 4; ++a) {
    Spectrum s = base;
    for (std::size_t i = 0; i < spectrum_size_; ++i) s[i] *= derivative_symbol(i, a);
    out[a] = inverse(std::move(s));
  }
  return out;
}

Eigen::VectorXd Spectral::filter(const Eigen::VectorXd& f) const {
  Spectrum s = forward(f);
  for (std::size_t i = 0; i < spectrum_size_; ++i) {
    if (nyquist_[i]) s[i] = 0.0;
  }
  return inverse(std::move(s));
}

Eigen::VectorXd Spectral::solve_shifted_laplacian(const Eigen::VectorXd& f, double shift) const {
  Spectrum s = forward(f);
  for (std::size_t i = 0; i < spectrum_size_; ++i) {
    const double symbol = laplacian_[i] + shift;
    if (nyquist_[i] || symbol <= 0.0) {
      s[i] = 0.0;
    } else {
      s[i] /= symbol;
    }
  }
  return inverse(std::move(s));
}

}  // namespace acslab

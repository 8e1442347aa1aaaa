#pragma once

// FFT-backed Fourier collocation on a GridChart. Derivatives are exact for
// band-limited data; the Nyquist coefficient of every differentiated axis is
// dropped so that the derivative matrices are real and skew-symmetric.

#include <array>
#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "acslab/grid.hpp"

namespace acslab {

class Spectral {
 public:
  using Spectrum = std::vector<std::complex<double>>;

  /// Shared per-chart instance; plan creation is serialized internally.
  static std::shared_ptr<const Spectral> get(const GridChart& chart);

  explicit Spectral(const GridChart& chart);
  ~Spectral();
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  const GridChart& chart() const { return chart_; }
  std::size_t spectrum_size() const { return spectrum_size_; }

  Spectrum forward(const Eigen::VectorXd& f) const;
  /// Consumes its argument.
  Eigen::VectorXd inverse(Spectrum s) const;

  /// i·(2π k_a / L_a) with the Nyquist entry set to zero.
  std::complex<double> derivative_symbol(std::size_t s, int axis) const {
    return {0.0, wavenumber_[axis][s]};
  }
  double laplacian_symbol(std::size_t s) const { return laplacian_[s]; }
  bool touches_nyquist(std::size_t s) const { return nyquist_[s] != 0; }
  std::array<int, 4> mode(std::size_t s) const;

  Eigen::VectorXd derivative(const Eigen::VectorXd& f, int axis) const;
  std::array<Eigen::VectorXd, 4> gradient(const Eigen::VectorXd& f) const;

  /// Drops every Fourier mode with |k_a| = N/2 on some axis.
  Eigen::VectorXd filter(const Eigen::VectorXd& f) const;
  /// (−Δ + shift)^{-1} for the flat Laplacian; with shift = 0 the constant
  /// mode (and every mode with zero symbol) is mapped to zero.
  Eigen::VectorXd solve_shifted_laplacian(const Eigen::VectorXd& f, double shift) const;

 private:
  GridChart chart_;
  std::size_t spectrum_size_ = 0;
  std::array<std::vector<double>, 4> wavenumber_;
  std::array<std::vector<int>, 4> mode_;
  std::vector<double> laplacian_;
  std::vector<char> nyquist_;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

}  // namespace acslab

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace wrfrft {

using cdouble = std::complex<double>;
using CVector = std::vector<cdouble>;

struct Angle {
  double alpha = 0.0;  // radians

  static Angle from_order(double p) { return {p * 1.5707963267948966}; }
  double order() const { return alpha / 1.5707963267948966; }
  /// alpha reduced to [0, 2 pi).
  double wrapped() const;
};

inline constexpr double kDegenerateAngleTol = 1e-6;

enum class FrftMode {
  exact,        // Hermite-Gauss eigendecomposition, O(n^2) per apply
  fast,         // chirp / chirp-convolution / chirp, O(n log n)
  closed_form,  // chirp x centered DFT x chirp, exactly unitary, O(n log n)
};

const char* to_string(FrftMode mode);
FrftMode frft_mode_from_string(const std::string& name);

/// Sample spacing of the dimensionless slow-time grid, sqrt(2 pi / n).
inline double frft_grid_step(std::size_t n) { return std::sqrt(2.0 * 3.14159265358979323846 / static_cast<double>(n)); }

/// Orthonormal discrete Hermite-Gauss basis; column k has order k. Cached per n.
std::shared_ptr<const Eigen::MatrixXd> hermite_gauss_basis(std::size_t n);

/// Exact-mode transform matrix. Throws DegenerateAngleError within
/// kDegenerateAngleTol of a multiple of pi.
Eigen::MatrixXcd kernel_matrix(std::size_t n, Angle alpha);

CVector frft_exact(std::span<const cdouble> x, Angle alpha);
CVector frft_fast(std::span<const cdouble> x, Angle alpha);
CVector frft_closed_form(std::span<const cdouble> x, Angle alpha);
CVector frft(std::span<const cdouble> x, Angle alpha, FrftMode mode);

/// Immutable plan for repeated transforms of one length and angle.
class FrftPlan {
 public:
  FrftPlan(std::size_t n, Angle alpha, FrftMode mode = FrftMode::exact);

  std::size_t size() const { return n_; }
  Angle angle() const { return alpha_; }
  FrftMode mode() const { return mode_; }
  double scale() const { return frft_grid_step(n_); }

  CVector apply(std::span<const cdouble> x) const;

 private:
  std::size_t n_;
  Angle alpha_;
  FrftMode mode_;
  std::shared_ptr<const Eigen::MatrixXcd> matrix_;  // exact mode, non-degenerate angles
};

}  // namespace wrfrft

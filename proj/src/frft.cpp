#include "wrfrft/frft.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>

#include "wrfrft/errors.hpp"
#include "wrfrft/fft.hpp"

namespace wrfrft {
namespace {

constexpr double pi = std::numbers::pi;
constexpr cdouble J{0.0, 1.0};

double wrap_2pi(double a) {
  a = std::fmod(a, 2.0 * pi);
  if (a < 0.0) a += 2.0 * pi;
  return a;
}

// Identity / reversal branches at multiples of pi.
std::optional<CVector> degenerate(std::span<const cdouble> x, double a) {
  if (std::min(a, 2.0 * pi - a) < kDegenerateAngleTol) return CVector(x.begin(), x.end());
  if (std::abs(a - pi) < kDegenerateAngleTol) return CVector(x.rbegin(), x.rend());
  return std::nullopt;
}

// Hermite-Gauss functions of orders 0..n-1 on t_m = (m - c) D, times sqrt(D).
// The recurrence runs on a rescaled pair so the Gaussian never underflows
// before the polynomial part has grown.
Eigen::MatrixXd sampled_hermite_gauss(std::size_t n) {
  const double d = frft_grid_step(n);
  const double c = 0.5 * static_cast<double>(n - 1);
  const double norm = std::pow(pi, -0.25) * std::sqrt(d);
  Eigen::MatrixXd h(n, n);
  for (std::size_t m = 0; m < n; ++m) {
    const double t = (static_cast<double>(m) - c) * d;
    double log_scale = -0.5 * t * t;
    double prev = 0.0;
    double cur = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == 1) {
        prev = cur;
        cur = std::sqrt(2.0) * t * prev;
      } else if (k > 1) {
        const double kd = static_cast<double>(k);
        const double next = std::sqrt(2.0 / kd) * t * cur - std::sqrt((kd - 1.0) / kd) * prev;
        prev = cur;
        cur = next;
      }
      h(m, k) = norm * cur * std::exp(log_scale);
      if (std::abs(cur) > 1e150) {
        cur *= 1e-150;
        prev *= 1e-150;
        log_scale += 150.0 * std::log(10.0);
      }
    }
  }
  return h;
}

// Real part of the projection of a real vector onto the eigenspace of the
// centered DFT with eigenvalue (-j)^r.
Eigen::VectorXd project(const Eigen::VectorXd& h, int r) {
  const std::size_t n = static_cast<std::size_t>(h.size());
  CVector fwd(h.data(), h.data() + n);
  CVector inv = fwd;
  fft::centered_dft(fwd, -1);
  fft::centered_dft(inv, +1);
  const cdouble w = std::pow(J, r);  // conj((-j)^r)
  const cdouble w2 = w * w;
  const cdouble w3 = w2 * w;
  Eigen::VectorXd out(n);
  for (std::size_t m = 0; m < n; ++m) {
    const cdouble v = h[m] + w * fwd[m] + w2 * h[n - 1 - m] + w3 * inv[m];
    out[m] = 0.25 * v.real();
  }
  return out;
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& b) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(b.rows(), b.cols());
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < b.cols(); ++k)
    if (r(k, k) < 0.0) q.col(k) = -q.col(k);
  return q;
}

Eigen::MatrixXd build_basis(std::size_t n) {
  const Eigen::MatrixXd h = sampled_hermite_gauss(n);
  Eigen::MatrixXd v(n, n);
  for (int r = 0; r < 4; ++r) {
    std::vector<Eigen::Index> cols;
    for (std::size_t k = static_cast<std::size_t>(r); k < n; k += 4) cols.push_back(static_cast<Eigen::Index>(k));
    if (cols.empty()) continue;
    Eigen::MatrixXd block(n, cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) block.col(i) = project(h.col(cols[i]), r);
    Eigen::MatrixXd q = orthonormalize(block);
    // second pass removes the leakage left by the first
    for (Eigen::Index i = 0; i < q.cols(); ++i) q.col(i) = project(q.col(i), r);
    q = orthonormalize(q);
    for (std::size_t i = 0; i < cols.size(); ++i) v.col(cols[i]) = q.col(i);
  }
  return v;
}


// Half-sample interpolation: 2n-1 samples at spacing D/2.
CVector interpolate2(std::span<const cdouble> x) {
  const std::size_t n = x.size();
  CVector spec(x.begin(), x.end());
  fft::transform(spec, -1);
  for (std::size_t k = 0; k < n; ++k) {
    const long long kk = static_cast<long long>(k);
    const long long f = (k < (n + 1) / 2) ? kk : kk - static_cast<long long>(n);
    spec[k] *= std::polar(1.0 / static_cast<double>(n), pi * static_cast<double>(f) / static_cast<double>(n));
  }
  fft::transform(spec, +1);
  CVector y(2 * n - 1);
  for (std::size_t m = 0; m < n; ++m) y[2 * m] = x[m];
  for (std::size_t m = 0; m + 1 < n; ++m) y[2 * m + 1] = spec[m];
  return y;
}

// Chirp multiply, chirp convolve, chirp multiply; alpha in [pi/4, 3pi/4].
CVector fast_core(std::span<const cdouble> x, double a) {
  const std::size_t n = x.size();
  const double hstep = 0.5 * frft_grid_step(n);
  CVector y = interpolate2(x);
  const std::size_t m = y.size();
  const double cot = 1.0 / std::tan(a);
  const double csc = 1.0 / std::sin(a);
  const cdouble amp = std::sqrt((1.0 - J * cot) / (2.0 * pi)) * hstep;

  std::vector<double> t(m);
  for (std::size_t i = 0; i < m; ++i) t[i] = (static_cast<double>(i) - static_cast<double>(n - 1)) * hstep;

  std::size_t len = 1;
  while (len < 3 * m) len <<= 1;
  CVector g(len, 0.0);
  CVector ker(len, 0.0);
  for (std::size_t i = 0; i < m; ++i) g[i] = std::polar(1.0, 0.5 * (cot - csc) * t[i] * t[i]) * y[i];
  for (std::size_t i = 0; i < 2 * m - 1; ++i) {
    const double d = (static_cast<double>(i) - static_cast<double>(m - 1)) * hstep;
    ker[i] = std::polar(1.0, 0.5 * csc * d * d);
  }
  fft::transform(g, -1);
  fft::transform(ker, -1);
  for (std::size_t i = 0; i < len; ++i) g[i] *= ker[i] / static_cast<double>(len);
  fft::transform(g, +1);

  CVector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = 2 * k;
    out[k] = amp * std::polar(1.0, 0.5 * (cot - csc) * t[i] * t[i]) * g[i + m - 1];
  }
  return out;
}

}  // namespace

double Angle::wrapped() const { return wrap_2pi(alpha); }

const char* to_string(FrftMode mode) {
  switch (mode) {
    case FrftMode::exact: return "exact";
    case FrftMode::fast: return "fast";
    case FrftMode::closed_form: return "closed_form";
  }
  return "?";
}

FrftMode frft_mode_from_string(const std::string& name) {
  if (name == "exact") return FrftMode::exact;
  if (name == "fast") return FrftMode::fast;
  if (name == "closed_form") return FrftMode::closed_form;
  throw ValidationError("unknown FRFT mode '" + name + "' (exact | fast | closed_form)");
}

std::shared_ptr<const Eigen::MatrixXd> hermite_gauss_basis(std::size_t n) {
  if (n < 2) throw ValidationError("FRFT length must be >= 2");
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const Eigen::MatrixXd>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const Eigen::MatrixXd>(build_basis(n));
  return slot;
}

Eigen::MatrixXcd kernel_matrix(std::size_t n, Angle alpha) {
  const double a = alpha.wrapped();
  if (std::min(a, 2.0 * pi - a) < kDegenerateAngleTol || std::abs(a - pi) < kDegenerateAngleTol)
    throw DegenerateAngleError("angle " + std::to_string(alpha.alpha) +
                               " is a multiple of pi; use the identity/reversal branch");
  const auto basis = hermite_gauss_basis(n);
  Eigen::MatrixXcd scaled = basis->cast<cdouble>();
  for (std::size_t k = 0; k < n; ++k) scaled.col(k) *= std::polar(1.0, -static_cast<double>(k) * alpha.alpha);
  return scaled * basis->transpose().cast<cdouble>();
}

CVector frft_exact(std::span<const cdouble> x, Angle alpha) {
  const std::size_t n = x.size();
  if (n < 2) throw ValidationError("FRFT length must be >= 2");
  if (auto d = degenerate(x, alpha.wrapped())) return *d;
  const auto basis = hermite_gauss_basis(n);
  Eigen::Map<const Eigen::VectorXcd> xv(x.data(), static_cast<Eigen::Index>(n));
  Eigen::VectorXcd coef = basis->transpose().cast<cdouble>() * xv;
  for (std::size_t k = 0; k < n; ++k) coef[k] *= std::polar(1.0, -static_cast<double>(k) * alpha.alpha);
  Eigen::VectorXcd out = basis->cast<cdouble>() * coef;
  return CVector(out.data(), out.data() + n);
}

CVector frft_fast(std::span<const cdouble> x, Angle alpha) {
  if (x.size() < 8) throw ValidationError("fast FRFT needs at least 8 samples");
  double a = alpha.wrapped();
  if (auto d = degenerate(x, a)) return *d;
  CVector cur(x.begin(), x.end());
  // F_a = F_{a - pi/2} F_{pi/2}, with the quarter turn done exactly
  while (a < 0.25 * pi || a > 0.75 * pi) {
    fft::centered_dft(cur, -1);
    a = wrap_2pi(a - 0.5 * pi);
  }
  return fast_core(cur, a);
}

CVector frft_closed_form(std::span<const cdouble> x, Angle alpha) {
  const std::size_t n = x.size();
  if (n < 2) throw ValidationError("FRFT length must be >= 2");
  const double a = alpha.wrapped();
  if (auto d = degenerate(x, a)) return *d;
  const double s = std::sin(a);
  const double cot = std::cos(a) / s;
  const double step = frft_grid_step(n);
  const double c = 0.5 * static_cast<double>(n - 1);
  CVector y(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double t = (static_cast<double>(m) - c) * step;
    y[m] = std::polar(1.0, 0.5 * cot * t * t) * x[m];
  }
  fft::centered_dft(y, s > 0.0 ? -1 : +1);
  const cdouble amp = std::sqrt(1.0 - J * cot) * std::sqrt(std::abs(s));
  for (std::size_t k = 0; k < n; ++k) {
    const double u = (static_cast<double>(k) - c) * step * std::abs(s);
    y[k] *= amp * std::polar(1.0, 0.5 * cot * u * u);
  }
  return y;
}

CVector frft(std::span<const cdouble> x, Angle alpha, FrftMode mode) {
  switch (mode) {
    case FrftMode::exact: return frft_exact(x, alpha);
    case FrftMode::fast: return frft_fast(x, alpha);
    case FrftMode::closed_form: return frft_closed_form(x, alpha);
  }
  return {};
}

FrftPlan::FrftPlan(std::size_t n, Angle alpha, FrftMode mode) : n_(n), alpha_(alpha), mode_(mode) {
  if (n < 2) throw ValidationError("FRFT length must be >= 2");
  const double a = alpha.wrapped();
  const bool is_degenerate =
      std::min(a, 2.0 * pi - a) < kDegenerateAngleTol || std::abs(a - pi) < kDegenerateAngleTol;
  if (mode == FrftMode::exact && !is_degenerate)
    matrix_ = std::make_shared<const Eigen::MatrixXcd>(kernel_matrix(n, alpha));
}

CVector FrftPlan::apply(std::span<const cdouble> x) const {
  if (x.size() != n_) throw ValidationError("FRFT plan length mismatch");
  if (!matrix_) return frft(x, alpha_, mode_);
  Eigen::Map<const Eigen::VectorXcd> xv(x.data(), static_cast<Eigen::Index>(n_));
  Eigen::VectorXcd out = *matrix_ * xv;
  return CVector(out.data(), out.data() + n_);
}

}  // namespace wrfrft

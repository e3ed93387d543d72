#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wrfrft/errors.hpp"
#include "wrfrft/frft.hpp"

using namespace wrfrft;

namespace {

constexpr double pi = std::numbers::pi;
constexpr cdouble J{0.0, 1.0};

CVector random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g;
  CVector x(n);
  for (auto& v : x) v = {g(gen), g(gen)};
  return x;
}

// Random combination of the lowest `orders` Hermite-Gauss modes: compact in
// time and frequency, the regime a sampled-kernel fast transform resolves.
CVector compact_vector(std::size_t n, std::size_t orders, unsigned seed) {
  const auto basis = hermite_gauss_basis(n);
  const CVector coef = random_vector(orders, seed);
  CVector x(n, 0.0);
  for (std::size_t k = 0; k < orders; ++k)
    for (std::size_t m = 0; m < n; ++m) x[m] += (*basis)(m, k) * coef[k];
  return x;
}

double norm(const CVector& x) {
  double s = 0.0;
  for (auto v : x) s += std::norm(v);
  return std::sqrt(s);
}

double rel_err(const CVector& a, const CVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s) / norm(b);
}

// Direct O(n^2) centered unitary DFT.
CVector direct_centered_dft(const CVector& x) {
  const std::size_t n = x.size();
  const double c = 0.5 * static_cast<double>(n - 1);
  CVector out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t m = 0; m < n; ++m)
      out[k] += x[m] * std::polar(1.0, -2.0 * pi * (static_cast<double>(k) - c) *
                                           (static_cast<double>(m) - c) / static_cast<double>(n));
  for (auto& v : out) v /= std::sqrt(static_cast<double>(n));
  return out;
}

// Direct sum of the chirp kernel with input spacing D = sqrt(2 pi / n) and
// output spacing D |sin a|; sqrt|sin a| is the output quadrature weight.
CVector direct_chirp_kernel(const CVector& x, double a) {
  const std::size_t n = x.size();
  const double d = std::sqrt(2.0 * pi / static_cast<double>(n));
  const double c = 0.5 * static_cast<double>(n - 1);
  const double cot = 1.0 / std::tan(a);
  const double csc = 1.0 / std::sin(a);
  const cdouble amp = std::sqrt((1.0 - J * cot) / (2.0 * pi)) * d * std::sqrt(std::abs(std::sin(a)));
  CVector out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = (static_cast<double>(k) - c) * d * std::abs(std::sin(a));
    for (std::size_t m = 0; m < n; ++m) {
      const double t = (static_cast<double>(m) - c) * d;
      out[k] += x[m] * std::exp(J * (0.5 * u * u * cot - u * t * csc + 0.5 * t * t * cot));
    }
    out[k] *= amp;
  }
  return out;
}

}  // namespace

TEST_CASE("kernel matrix at a quarter turn is the centered DFT") {
  for (std::size_t n : {8, 9, 64, 65, 256}) {
    const auto m = kernel_matrix(n, {pi / 2});
    double worst = 0.0;
    for (std::size_t col = 0; col < n; ++col) {
      CVector e(n, 0.0);
      e[col] = 1.0;
      const CVector ref = direct_centered_dft(e);
      for (std::size_t row = 0; row < n; ++row) worst = std::max(worst, std::abs(m(row, col) - ref[row]));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("degenerate angles route to identity and reversal") {
  const CVector x = random_vector(16, 1);
  for (auto mode : {FrftMode::exact, FrftMode::fast, FrftMode::closed_form}) {
    CHECK(frft(x, {0.0}, mode) == x);
    CHECK(frft(x, {2 * pi}, mode) == x);
    const CVector r = frft(x, {pi}, mode);
    for (std::size_t k = 0; k < x.size(); ++k) CHECK(r[k] == x[x.size() - 1 - k]);
  }
  CHECK_THROWS_AS(kernel_matrix(8, {pi + 1e-8}), DegenerateAngleError);
  CHECK_THROWS_AS(kernel_matrix(8, {0.0}), DegenerateAngleError);
}

TEST_CASE("kernel matrices at +a and -a are inverses") {
  const Eigen::MatrixXcd prod = kernel_matrix(8, {0.7}) * kernel_matrix(8, {-0.7});
  CHECK((prod - Eigen::MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("centered impulse transforms to a flat magnitude") {
  CVector x(65, 0.0);
  x[32] = 1.0;
  const CVector y = frft_exact(x, {pi / 2});
  const double ref = std::abs(y[0]);
  for (auto v : y) CHECK(std::abs(std::abs(v) - ref) < 1e-6);
}

TEST_CASE("matched chirp focuses and the angle sweep peaks at the matched angle") {
  const std::size_t n = 257;
  const double d = frft_grid_step(n);
  for (double a0 : {1.1, 1.3, 1.45, 1.9}) {
    CVector x(n);
    for (std::size_t m = 0; m < n; ++m) {
      const double t = (static_cast<double>(m) - 0.5 * (n - 1)) * d;
      x[m] = std::polar(1.0, -0.5 * t * t / std::tan(a0));
    }
    const CVector y = frft_exact(x, {a0});
    double peak = 0.0, total = 0.0;
    for (auto v : y) {
      peak = std::max(peak, std::norm(v));
      total += std::norm(v);
    }
    CHECK(peak / total > 0.8);

    double best = -1.0, best_a = 0.0;
    for (int i = 0; i <= 250; ++i) {
      const double a = 0.3 + 0.01 * i;
      double p = 0.0;
      for (auto v : frft_exact(x, {a})) p = std::max(p, std::abs(v));
      if (p > best) best = p, best_a = a;
    }
    CHECK(std::abs(best_a - a0) <= 0.011);
  }
}

TEST_CASE("exact mode algebraic properties") {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> ang(0.3, 1.2);
  for (std::size_t n : {64, 256}) {
    for (unsigned trial = 0; trial < 5; ++trial) {
      const CVector x = random_vector(n, 100 + trial);
      const CVector x2 = random_vector(n, 200 + trial);
      const double a = ang(gen), b = ang(gen);
      const CVector fa = frft_exact(x, {a});
      const CVector fba = frft_exact(fa, {b});
      const CVector fab = frft_exact(frft_exact(x, {b}), {a});
      CHECK(rel_err(fba, frft_exact(x, {a + b})) <= 1e-6);
      CHECK(rel_err(fba, fab) <= 1e-6);
      CHECK(rel_err(frft_exact(fa, {-a}), x) <= 1e-6);
      CHECK(std::abs(norm(fa) * norm(fa) / (norm(x) * norm(x)) - 1.0) <= 1e-6);

      const cdouble e1{0.3, -1.1}, e2{2.0, 0.5};
      CVector mix(n);
      for (std::size_t i = 0; i < n; ++i) mix[i] = e1 * x[i] + e2 * x2[i];
      const CVector lhs = frft_exact(mix, {a});
      const CVector f2 = frft_exact(x2, {a});
      CVector rhs(n);
      for (std::size_t i = 0; i < n; ++i) rhs[i] = e1 * fa[i] + e2 * f2[i];
      CHECK(rel_err(lhs, rhs) <= 1e-12);
    }
  }
}

TEST_CASE("fast mode tracks exact mode on compact signals") {
  const std::size_t n = 256;
  for (unsigned seed = 0; seed < 4; ++seed) {
    const CVector x = compact_vector(n, n / 2, seed);
    for (double a : {0.2, 0.7, 1.3, 2.0, 3.0, 4.5})
      CHECK(rel_err(frft_fast(x, {a}), frft_exact(x, {a})) <= 1e-2);
    CHECK(rel_err(frft_fast(x, {pi / 2}), direct_centered_dft(x)) <= 1e-2);
    const CVector twice = frft_fast(frft_fast(x, {0.7}), {0.9});
    CHECK(rel_err(twice, frft_fast(x, {1.6})) <= 2e-2);
    const CVector y = frft_fast(x, {1.1});
    CHECK(std::abs(norm(y) / norm(x) - 1.0) <= 1e-2);
  }
  CHECK_THROWS_AS(frft_fast(CVector(4), {1.0}), ValidationError);
}

TEST_CASE("closed form matches the direct chirp kernel sum") {
  for (std::size_t n : {33, 64, 255}) {
    const CVector x = random_vector(n, static_cast<unsigned>(n));
    for (double a : {0.05, 0.4, 1.3, 2.2, 2.9}) {
      const CVector y = frft_closed_form(x, {a});
      CHECK(rel_err(y, direct_chirp_kernel(x, a)) <= 1e-9);
      CHECK(std::abs(norm(y) / norm(x) - 1.0) <= 1e-12);
    }
    CHECK(rel_err(frft_closed_form(x, {pi / 2}), direct_centered_dft(x)) <= 1e-12);
  }
}

TEST_CASE("closed form focuses a strongly aliased chirp") {
  // radar slow-time chirp: 450 pulses, lambda 5 cm, PRF 200 Hz, A = 26 m/s^2
  const std::size_t n = 450;
  const double lambda = 0.05, prf = 200.0, accel = 26.0;
  CVector x(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double tau = static_cast<double>(m) / prf;
    x[m] = std::polar(1.0, -4.0 * pi * (861.0 + 90.0 * tau + accel * tau * tau) / lambda);
  }
  const double cot = 4.0 * accel * static_cast<double>(n) / prf / (lambda * prf);
  const CVector y = frft_closed_form(x, {std::atan2(1.0, cot)});
  double peak = 0.0;
  for (auto v : y) peak = std::max(peak, std::abs(v));
  CHECK(peak > 0.9 * std::sqrt(static_cast<double>(n)));
}

TEST_CASE("plans reproduce the free functions") {
  const CVector x = random_vector(64, 9);
  for (auto mode : {FrftMode::exact, FrftMode::fast, FrftMode::closed_form}) {
    const FrftPlan plan(64, {1.1}, mode);
    CHECK(rel_err(plan.apply(x), frft(x, {1.1}, mode)) <= 1e-12);
  }
  CHECK(FrftPlan(64, {1.0}).scale() == doctest::Approx(std::sqrt(2 * pi / 64)));
  CHECK_THROWS_AS(frft_mode_from_string("bogus"), ValidationError);
}

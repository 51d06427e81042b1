#pragma once

// Independent reference solutions used by the tests.

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

namespace oracle {

// Modified Bessel I1 by its power series (converges for all x; fine to ~x = 50).
inline double bessel_i1(double x) {
  const double h = x / 2.0;
  double term = h;  // k = 0
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= h * h / (static_cast<double>(k) * (k + 1));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

// Regular part of C_a(t, t') for a square pump without walkoff, s = t - t' > 0:
// g sqrt(L / s) I1(2 g sqrt(L s)).
inline double square_pump_ca(double g, double length, double s) {
  return g * std::sqrt(length / s) * bessel_i1(2.0 * g * std::sqrt(length * s));
}

// Haar-ish random unitary from the QR of a complex Gaussian matrix.
inline Eigen::MatrixXcd random_unitary(int n, std::mt19937& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = {N(rng), N(rng)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ();
  return q;
}

inline Eigen::VectorXcd random_vector(int n, std::mt19937& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = {N(rng), N(rng)};
  return v;
}

// Direct convolution of two pmfs on [0, n_max].
inline std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> c(a.size(), 0.0);
  for (std::size_t n = 0; n < c.size(); ++n)
    for (std::size_t k = 0; k <= n; ++k) c[n] += a[k] * b[n - k];
  return c;
}

inline std::vector<double> geometric(double nbar, std::size_t size) {
  std::vector<double> p(size);
  for (std::size_t n = 0; n < size; ++n)
    p[n] = std::pow(nbar / (1.0 + nbar), static_cast<double>(n)) / (1.0 + nbar);
  return p;
}

}  // namespace oracle

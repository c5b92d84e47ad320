#include "consensus/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "consensus/error.hpp"

namespace consensus {

std::vector<double> characteristic_polynomial(const Matrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "characteristic polynomial of a non-square matrix");
  const std::size_t n = m.rows();
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  Matrix mk(n, n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    Matrix next = m * mk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    mk = std::move(next);
    const Matrix amk = m * mk;
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += amk(i, i);
    c[n - k] = -trace / static_cast<double>(k);
  }
  return c;
}

namespace {

std::complex<double> horner(const std::vector<double>& c, std::complex<double> z) {
  std::complex<double> acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
  return acc;
}

std::complex<double> horner_derivative(const std::vector<double>& c, std::complex<double> z) {
  std::complex<double> acc = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * z + static_cast<double>(k) * c[k];
  return acc;
}

}  // namespace

std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coeffs) {
  std::vector<double> c = coeffs;
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  if (c.size() < 2) return {};
  const double lead = c.back();
  for (double& v : c) v /= lead;
  const std::size_t degree = c.size() - 1;

  // Cauchy bound on root magnitudes seeds the initial circle.
  double bound = 0.0;
  for (std::size_t k = 0; k < degree; ++k) bound = std::max(bound, std::abs(c[k]));
  bound += 1.0;

  std::vector<std::complex<double>> z(degree);
  const std::complex<double> seed(0.4, 0.9);
  for (std::size_t i = 0; i < degree; ++i) z[i] = bound * std::pow(seed / std::abs(seed), static_cast<double>(i)) * 0.5;

  for (int iter = 0; iter < 2000; ++iter) {
    double change = 0.0;
    for (std::size_t i = 0; i < degree; ++i) {
      std::complex<double> denom = 1.0;
      for (std::size_t j = 0; j < degree; ++j)
        if (j != i) denom *= (z[i] - z[j]);
      if (std::abs(denom) == 0.0) denom = 1e-300;
      const std::complex<double> step = horner(c, z[i]) / denom;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change <= 1e-15 * bound) break;
  }

  for (auto& root : z) {
    for (int iter = 0; iter < 50; ++iter) {
      const std::complex<double> d = horner_derivative(c, root);
      if (std::abs(d) == 0.0) break;
      const std::complex<double> step = horner(c, root) / d;
      root -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(root))) break;
    }
  }
  return z;
}

}  // namespace consensus

#include "consensus/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include "consensus/error.hpp"
#include "consensus/polynomial.hpp"

namespace consensus {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kJacobiTol = 1e-12;
constexpr int kMaxSweeps = 100;
constexpr int kPowerIterations = 10'000;
constexpr double kPowerTol = 1e-10;
constexpr std::size_t kPolynomialFallbackOrder = 6;

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t p = 0; p < a.rows(); ++p)
    for (std::size_t q = 0; q < a.cols(); ++q)
      if (p != q) s += a(p, q) * a(p, q);
  return std::sqrt(s);
}

void rotate(Matrix& a, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
}

double norm2(std::span<const double> v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

double radius_by_polynomial(const Matrix& a) {
  double rho = 0.0;
  for (const auto& root : polynomial_roots(characteristic_polynomial(a)))
    rho = std::max(rho, std::abs(root));
  return rho;
}

double spectral_radius(const Matrix& a) {
  const std::size_t n = a.rows();
  if (a.frobenius_norm() == 0.0) return 0.0;

  std::vector<double> v(n);
  std::iota(v.begin(), v.end(), 1.0);
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
  for (double& x : v) x -= mean;
  const double vn = norm2(v);
  for (double& x : v) x /= vn;

  double previous = -1.0;
  for (int it = 0; it < kPowerIterations; ++it) {
    std::vector<double> w = multiply(a, v);
    const double estimate = norm2(w);
    if (estimate == 0.0) break;  // start vector in the kernel: stagnation
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / estimate;
    if (previous >= 0.0 && std::abs(estimate - previous) <= kPowerTol * estimate) return estimate;
    previous = estimate;
  }
  if (n <= kPolynomialFallbackOrder) return radius_by_polynomial(a);
  throw Error(ErrorCode::ConvergenceFailure,
              "power iteration did not converge for a product of order " + std::to_string(n));
}

}  // namespace

std::vector<double> symmetric_eigenvalues(const Matrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::NotSymmetric, "eigenvalues requested for a non-square matrix");
  if (!m.is_symmetric(kSymmetryTol)) throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric");

  Matrix a = m;
  const std::size_t n = a.rows();
  // Symmetrise exactly so rotations act on a truly symmetric matrix.
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) a(p, q) = a(q, p) = 0.5 * (a(p, q) + a(q, p));

  const double scale = a.frobenius_norm();
  bool converged = scale == 0.0;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    if (off_diagonal_norm(a) <= kJacobiTol * scale) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, p, q);
  }
  if (!converged && off_diagonal_norm(a) > kJacobiTol * scale) {
    throw Error(ErrorCode::ConvergenceFailure, "Jacobi sweeps did not converge");
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

SpectralSummary spectral_summary(const AgentGraph& g) {
  if (!is_connected(g)) {
    throw Error(ErrorCode::GraphDisconnected,
                "the communication graph must be connected for the Laplacian to be invertible on "
                "zero-average states");
  }
  std::vector<double> eig = symmetric_eigenvalues(laplacian(g).entries);

  const double largest = std::max(std::abs(eig.front()), std::abs(eig.back()));
  SpectralSummary s;
  s.multiplicity = g.state_dim();
  s.zero_multiplicity = static_cast<std::size_t>(std::count_if(
      eig.begin(), eig.end(), [&](double x) { return std::abs(x) <= 1e-10 * largest; }));

  const auto zero = std::min_element(eig.begin(), eig.end(),
                                     [](double x, double y) { return std::abs(x) < std::abs(y); });
  eig.erase(zero);
  s.eigenvalues_h1 = std::move(eig);
  s.norm_delta = std::abs(s.eigenvalues_h1.front());
  s.norm_delta_inv_inv = std::abs(s.eigenvalues_h1.back());
  return s;
}

Matrix project_h1(const Matrix& m, std::size_t n) {
  if (m.rows() != n || m.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "projection expects an N x N matrix");
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  Matrix out = m;
  // Left multiplication: subtract column means.
  for (std::size_t c = 0; c < n; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += out(r, c);
    mean *= inv_n;
    for (std::size_t r = 0; r < n; ++r) out(r, c) -= mean;
  }
  // Right multiplication: subtract row means.
  for (std::size_t r = 0; r < n; ++r) {
    double mean = 0.0;
    for (std::size_t c = 0; c < n; ++c) mean += out(r, c);
    mean *= inv_n;
    for (std::size_t c = 0; c < n; ++c) out(r, c) -= mean;
  }
  return out;
}

Matrix restrict_to_h1(const Matrix& m) {
  if (!m.is_square() || m.rows() < 2) {
    throw Error(ErrorCode::DimensionMismatch, "restriction expects a square matrix of order >= 2");
  }
  const std::size_t n = m.rows();
  // Helmert basis: column k has k entries 1, then -k, normalised.
  Matrix q(n, n - 1);
  for (std::size_t k = 1; k < n; ++k) {
    const double norm = std::sqrt(static_cast<double>(k * (k + 1)));
    for (std::size_t i = 0; i < k; ++i) q(i, k - 1) = 1.0 / norm;
    q(k, k - 1) = -static_cast<double>(k) / norm;
  }
  return q.transpose() * m * q;
}

std::string_view to_string(NormMode mode) noexcept {
  switch (mode) {
    case NormMode::spectral_radius: return "spectral_radius";
    case NormMode::operator_two_norm: return "operator_two_norm";
  }
  return "unknown";
}

double product_norm(const LaplacianMatrix& li, const LaplacianMatrix& lj, NormMode mode) {
  if (li.order() != lj.order()) {
    throw Error(ErrorCode::DimensionMismatch, "product of Laplacians of different order");
  }
  const Matrix product = project_h1(li.entries * lj.entries, li.order());
  if (mode == NormMode::spectral_radius) return spectral_radius(product);

  const std::vector<double> eig = symmetric_eigenvalues(product.transpose() * product);
  return std::sqrt(std::max(0.0, eig.back()));
}

ProductNormTable sum_product_norms(const AgentGraph& g, NormMode mode) {
  const auto subs = sub_laplacians(g);
  const std::size_t r = subs.size();
  ProductNormTable table{Matrix(r, r), mode, 0.0};
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i; j < r; ++j) {
      const double value = product_norm(subs[i], subs[j], mode);
      table.entries(i, j) = value;
      table.entries(j, i) = value;
    }
  }
  for (double v : table.entries.data()) table.total += v;
  return table;
}

}  // namespace consensus

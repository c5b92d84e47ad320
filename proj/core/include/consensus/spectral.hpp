#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "consensus/graph.hpp"
#include "consensus/matrix.hpp"

namespace consensus {

/// Full real spectrum of a symmetric matrix, ascending.
///
/// Cyclic Jacobi rotations in fixed row-major (p, q) order, so results are
/// bit-reproducible. Stops once the off-diagonal Frobenius norm drops below
/// 1e-12 of the matrix Frobenius norm; throws ConvergenceFailure after 100
/// sweeps and NotSymmetric if |m(i,j) - m(j,i)| > 1e-12 max|m|.
std::vector<double> symmetric_eigenvalues(const Matrix& m);

/// Laplacian spectrum restricted to the zero-average subspace.
struct SpectralSummary {
  std::vector<double> eigenvalues_h1;  ///< N-1 values, ascending, each with multiplicity d
  double norm_delta = 0.0;             ///< |lambda_min|
  double norm_delta_inv_inv = 0.0;     ///< |lambda_max| (smallest nonzero magnitude)
  std::size_t zero_multiplicity = 0;   ///< zeros found in the full N x N spectrum
  std::size_t multiplicity = 1;        ///< d
};

/// Throws GraphDisconnected unless the graph is connected. The eigenvalue
/// closest to zero is the one removed as the constant direction.
SpectralSummary spectral_summary(const AgentGraph& g);

/// P m P with P = I - (1/N) 11^T.
Matrix project_h1(const Matrix& m, std::size_t n);

/// Q^T m Q, where the columns of Q (N x (N-1)) are an orthonormal basis of
/// the zero-sum subspace. The spectrum of the result is the spectrum of m
/// on that subspace, without the constant direction.
Matrix restrict_to_h1(const Matrix& m);

enum class NormMode {
  spectral_radius,    ///< largest |eigenvalue| of the projected product
  operator_two_norm,  ///< largest singular value of the projected product
};

std::string_view to_string(NormMode mode) noexcept;

/// Norm of the product li * lj restricted to the zero-sum subspace.
///
/// spectral_radius uses the power method from the normalised projection of
/// (1, 2, ..., N), capped at 10 000 iterations with relative tolerance
/// 1e-10. If it stagnates, orders N <= 6 fall back to the roots of the
/// characteristic polynomial; larger orders throw ConvergenceFailure.
double product_norm(const LaplacianMatrix& li, const LaplacianMatrix& lj,
                    NormMode mode = NormMode::spectral_radius);

struct ProductNormTable {
  Matrix entries;  ///< r x r, entry (i, j) = ||L_{i+1} L_{j+1}||
  NormMode mode = NormMode::spectral_radius;
  double total = 0.0;
};

/// Every ordered pair of delay classes. Both norms are invariant under
/// swapping the factors, so only i <= j is computed and mirrored.
ProductNormTable sum_product_norms(const AgentGraph& g,
                                   NormMode mode = NormMode::spectral_radius);

}  // namespace consensus

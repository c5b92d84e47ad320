#pragma once

#include <complex>
#include <vector>

#include "consensus/matrix.hpp"

namespace consensus {

/// Monic characteristic polynomial det(zI - m), coefficients by ascending
/// power: result[k] multiplies z^k and result.back() == 1.
/// Faddeev-LeVerrier recursion; intended for small orders (N <= ~8).
std::vector<double> characteristic_polynomial(const Matrix& m);

/// All complex roots of a polynomial given by ascending coefficients, found
/// by simultaneous (Durand-Kerner) iteration followed by Newton polishing.
std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coeffs);

}  // namespace consensus

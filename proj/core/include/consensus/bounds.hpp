#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "consensus/graph.hpp"
#include "consensus/spectral.hpp"

namespace consensus {

// All margins are open bounds: consensus is guaranteed for delays strictly
// below the returned value.

/// Constant uniform delay: pi / (2 ||Delta||). Exact.
double margin_constant_uniform(const SpectralSummary& s);

/// Time-varying uniform delay: 3 / (2 ||Delta||). Exact over all
/// piecewise continuous delays bounded by the margin.
double margin_timevarying_uniform(const SpectralSummary& s);

/// Constant non-uniform delays share the uniform margin.
double margin_constant_nonuniform(const SpectralSummary& s);

/// Time-varying non-uniform delays (sufficient only):
/// ||Delta^-1||^-1 / sum_{i,j} ||Delta_i Delta_j||.
/// The result is a stability (boundedness) margin; no decay rate is implied.
double margin_timevarying_nonuniform(const AgentGraph& g,
                                     NormMode mode = NormMode::spectral_radius);
double margin_timevarying_nonuniform(const SpectralSummary& s, const ProductNormTable& table);

/// Largest constant uniform delay that still guarantees exponential decay
/// at rate h, i.e. the first tau >= 0 with
///   ||Delta|| e^{h tau} cos(tau sqrt(||Delta||^2 e^{2 h tau} - h^2)) = h.
/// h = 0 and h = ||Delta|| (to relative 1e-12) return pi/(2||Delta||) and 0
/// exactly. Throws DecayRateTooLarge for larger h.
double margin_decay_rate(const SpectralSummary& s, double h);
double margin_decay_rate(double norm_delta, double h);

/// Left side minus right side of the decay-rate crossing equation.
double decay_rate_residual(double norm_delta, double h, double tau);

enum class DelayIndependence {
  HoldsStrict,  ///< exponential consensus for any delays on the other classes
  HoldsWeak,    ///< necessary condition met with equality somewhere; inconclusive
  Fails,
};

std::string_view to_string(DelayIndependence v) noexcept;

struct DelayIndependenceResult {
  DelayIndependence verdict = DelayIndependence::Fails;
  double min_eigenvalue = 0.0;  ///< of sum_{i != zero} L_i - L_zero on the zero-sum subspace
};

/// Checks whether a delay-free class dominates all delayed classes:
/// L_zero < sum_{i != zero} L_i on zero-sum states, with tolerance 1e-10.
/// Throws UnknownClass if zero_class is not in 1..r.
DelayIndependenceResult delay_independent_check(const AgentGraph& g, std::size_t zero_class);

struct DecayMargin {
  double rate = 0.0;
  double tau = 0.0;
};

struct MarginReport {
  double constant_uniform = 0.0;
  double timevarying_uniform = 0.0;
  double constant_nonuniform = 0.0;
  double timevarying_nonuniform = 0.0;
  NormMode norm_mode = NormMode::spectral_radius;
  std::vector<DecayMargin> decay_margins;
  std::map<std::size_t, DelayIndependence> delay_independent;
};

/// Numeric pipeline: spectral summary, product norms and every margin.
/// Decay margins are evaluated at each rate in `decay_rates`; delay
/// independence for each class in `zero_classes`.
MarginReport margin_report(const AgentGraph& g, NormMode mode,
                           std::span<const double> decay_rates = {},
                           std::span<const std::size_t> zero_classes = {});

enum class GraphFamily { complete, loop };

std::string_view to_string(GraphFamily f) noexcept;

/// Margins of uniformly weighted complete / loop graphs with one delay
/// class per edge, from closed forms only (no eigensolve). Product norms
/// follow the spectral-radius convention. Throws BadSize for n < 2
/// (complete) or n < 3 (loop).
MarginReport closed_form_margins(GraphFamily family, std::size_t n, double delta);

/// Rightmost root of s - lambda e^{-s tau} = 0 for lambda < 0, tau >= 0.
/// Newton iteration from a grid of seeds; throws NoConvergence if no seed
/// converges.
std::complex<double> modal_rightmost_root(double lambda, double tau);

}  // namespace consensus

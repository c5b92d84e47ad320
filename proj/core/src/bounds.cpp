#include "consensus/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "consensus/error.hpp"

namespace consensus {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBisectionTol = 1e-10;
constexpr int kDecayScanPoints = 2000;
constexpr double kRateTol = 1e-12;
constexpr double kIndependenceTol = 1e-10;

void require_positive_norm(double norm_delta) {
  if (!(norm_delta > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "||Delta|| must be positive (connected graph)");
  }
}

}  // namespace

double margin_constant_uniform(const SpectralSummary& s) {
  require_positive_norm(s.norm_delta);
  return kPi / (2.0 * s.norm_delta);
}

double margin_timevarying_uniform(const SpectralSummary& s) {
  require_positive_norm(s.norm_delta);
  return 3.0 / (2.0 * s.norm_delta);
}

double margin_constant_nonuniform(const SpectralSummary& s) { return margin_constant_uniform(s); }

double margin_timevarying_nonuniform(const SpectralSummary& s, const ProductNormTable& table) {
  if (!(table.total > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "product-norm total must be positive");
  }
  return s.norm_delta_inv_inv / table.total;
}

double margin_timevarying_nonuniform(const AgentGraph& g, NormMode mode) {
  const SpectralSummary s = spectral_summary(g);
  return margin_timevarying_nonuniform(s, sum_product_norms(g, mode));
}

double decay_rate_residual(double norm_delta, double h, double tau) {
  const double growth = std::exp(h * tau);
  const double omega = std::sqrt(std::max(0.0, norm_delta * norm_delta * growth * growth - h * h));
  return norm_delta * growth * std::cos(tau * omega) - h;
}

double margin_decay_rate(double norm_delta, double h) {
  require_positive_norm(norm_delta);
  if (h < 0.0) throw Error(ErrorCode::InvalidArgument, "decay rate must be nonnegative");
  // ||Delta|| comes out of an eigensolve, so "h = ||Delta||" is matched to
  // a relative tolerance. The map h -> tau_h jumps to 0 only at that point.
  if (h > norm_delta * (1.0 + kRateTol)) {
    throw Error(ErrorCode::DecayRateTooLarge, "decay rate exceeds ||Delta||");
  }
  if (h == 0.0) return kPi / (2.0 * norm_delta);
  if (h >= norm_delta * (1.0 - kRateTol)) return 0.0;

  // The residual starts at ||Delta|| - h > 0. For rates close to ||Delta||
  // it turns positive again before pi/(2||Delta||), so the first crossing
  // is located by scanning rather than by the interval endpoints.
  const double upper = kPi / (2.0 * norm_delta);
  double lo = 0.0;
  double hi = -1.0;
  for (int k = 1; k <= kDecayScanPoints; ++k) {
    const double tau = upper * k / kDecayScanPoints;
    if (decay_rate_residual(norm_delta, h, tau) <= 0.0) {
      hi = tau;
      break;
    }
    lo = tau;
  }
  if (hi < 0.0) {
    throw Error(ErrorCode::NoConvergence, "no decay-rate crossing below pi/(2||Delta||)");
  }
  while (hi - lo > kBisectionTol) {
    const double mid = 0.5 * (lo + hi);
    if (decay_rate_residual(norm_delta, h, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double margin_decay_rate(const SpectralSummary& s, double h) {
  return margin_decay_rate(s.norm_delta, h);
}

std::string_view to_string(DelayIndependence v) noexcept {
  switch (v) {
    case DelayIndependence::HoldsStrict: return "HoldsStrict";
    case DelayIndependence::HoldsWeak: return "HoldsWeak";
    case DelayIndependence::Fails: return "Fails";
  }
  return "unknown";
}

DelayIndependenceResult delay_independent_check(const AgentGraph& g, std::size_t zero_class) {
  if (zero_class < 1 || zero_class > g.class_count()) {
    throw Error(ErrorCode::UnknownClass, "delay class " + std::to_string(zero_class) +
                                             " is not in 1.." + std::to_string(g.class_count()));
  }
  if (!is_connected(g)) {
    throw Error(ErrorCode::GraphDisconnected, "the communication graph must be connected");
  }
  const auto subs = sub_laplacians(g);
  Matrix difference(g.agents(), g.agents());
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (i + 1 == zero_class) {
      difference -= subs[i].entries;
    } else {
      difference += subs[i].entries;
    }
  }
  const double mu = symmetric_eigenvalues(restrict_to_h1(difference)).front();

  DelayIndependenceResult result;
  result.min_eigenvalue = mu;
  if (mu > kIndependenceTol) {
    result.verdict = DelayIndependence::HoldsStrict;
  } else if (mu >= -kIndependenceTol) {
    result.verdict = DelayIndependence::HoldsWeak;
  } else {
    result.verdict = DelayIndependence::Fails;
  }
  return result;
}

MarginReport margin_report(const AgentGraph& g, NormMode mode, std::span<const double> decay_rates,
                           std::span<const std::size_t> zero_classes) {
  const SpectralSummary s = spectral_summary(g);
  MarginReport report;
  report.constant_uniform = margin_constant_uniform(s);
  report.timevarying_uniform = margin_timevarying_uniform(s);
  report.constant_nonuniform = margin_constant_nonuniform(s);
  report.timevarying_nonuniform = margin_timevarying_nonuniform(s, sum_product_norms(g, mode));
  report.norm_mode = mode;
  for (double h : decay_rates) report.decay_margins.push_back({h, margin_decay_rate(s, h)});
  for (std::size_t cls : zero_classes)
    report.delay_independent[cls] = delay_independent_check(g, cls).verdict;
  return report;
}

std::string_view to_string(GraphFamily f) noexcept {
  switch (f) {
    case GraphFamily::complete: return "complete";
    case GraphFamily::loop: return "loop";
  }
  return "unknown";
}

MarginReport closed_form_margins(GraphFamily family, std::size_t n, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "edge weight must be positive");
  const double nd = static_cast<double>(n);
  double norm_delta = 0.0;
  double norm_inv_inv = 0.0;
  double total = 0.0;
  switch (family) {
    case GraphFamily::complete:
      if (n < 2) throw Error(ErrorCode::BadSize, "complete graph needs N >= 2");
      norm_delta = nd * delta;
      norm_inv_inv = nd * delta;
      total = delta * delta * nd * nd * (nd - 1.0);
      break;
    case GraphFamily::loop: {
      if (n < 3) throw Error(ErrorCode::BadSize, "loop graph needs N >= 3");
      const double far = std::sin(static_cast<double>(n / 2) * kPi / nd);
      const double near = std::sin(kPi / nd);
      // delta scales both extreme eigenvalues.
      norm_delta = 4.0 * delta * far * far;
      norm_inv_inv = 4.0 * delta * near * near;
      total = 6.0 * delta * delta * nd;
      break;
    }
  }
  MarginReport report;
  report.constant_uniform = kPi / (2.0 * norm_delta);
  report.timevarying_uniform = 3.0 / (2.0 * norm_delta);
  report.constant_nonuniform = report.constant_uniform;
  report.timevarying_nonuniform = norm_inv_inv / total;
  report.norm_mode = NormMode::spectral_radius;
  return report;
}

namespace {

struct NewtonResult {
  std::complex<double> root;
  bool converged = false;
};

NewtonResult newton_modal(double lambda, double tau, std::complex<double> s) {
  for (int it = 0; it < 100; ++it) {
    const std::complex<double> e = std::exp(-s * tau);
    const std::complex<double> f = s - lambda * e;
    const std::complex<double> df = 1.0 + lambda * tau * e;
    if (std::abs(df) == 0.0 || !std::isfinite(std::abs(f))) return {s, false};
    const std::complex<double> step = f / df;
    s -= step;
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) return {s, false};
    if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(s))) {
      const double residual = std::abs(s - lambda * std::exp(-s * tau));
      return {s, residual <= 1e-9 * std::max(1.0, std::abs(lambda))};
    }
  }
  return {s, false};
}

}  // namespace

std::complex<double> modal_rightmost_root(double lambda, double tau) {
  if (!(lambda < 0.0)) throw Error(ErrorCode::InvalidArgument, "modal eigenvalue must be negative");
  if (tau < 0.0) throw Error(ErrorCode::InvalidArgument, "delay must be nonnegative");
  if (tau == 0.0) return {lambda, 0.0};

  constexpr int kGrid = 24;
  const double mag = std::abs(lambda);
  const double re_lo = -5.0 * mag;
  const double re_hi = mag;
  const double im_hi = 2.0 * kPi / std::max(tau, 1e-12);

  bool found = false;
  std::complex<double> best;
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      const std::complex<double> seed(re_lo + (re_hi - re_lo) * i / (kGrid - 1),
                                      im_hi * j / (kGrid - 1));
      const NewtonResult r = newton_modal(lambda, tau, seed);
      if (!r.converged) continue;
      const std::complex<double> root(r.root.real(), std::abs(r.root.imag()));
      if (!found || root.real() > best.real()) {
        best = root;
        found = true;
      }
    }
  }
  if (!found) throw Error(ErrorCode::NoConvergence, "Newton iteration found no modal root");
  return best;
}

}  // namespace consensus

#include "consensus/delay_signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "consensus/error.hpp"

namespace consensus {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, what);
}

double declared_or(std::optional<double> bound, double fallback) {
  if (!bound) return fallback;
  if (!(*bound >= 0.0) || !std::isfinite(*bound)) {
    throw Error(ErrorCode::SignalViolatesBound, "declared delay bound must be finite and >= 0");
  }
  return *bound;
}

}  // namespace

DelaySignal DelaySignal::constant(double tau) {
  require_finite(tau, "constant delay must be finite");
  if (tau < 0.0) throw Error(ErrorCode::SignalViolatesBound, "delay must be nonnegative");
  return DelaySignal(Constant{tau}, tau);
}

DelaySignal DelaySignal::piecewise_constant(std::vector<double> breakpoints,
                                            std::vector<double> values,
                                            std::optional<double> bound) {
  if (values.size() != breakpoints.size() + 1) {
    throw Error(ErrorCode::InvalidArgument,
                "piecewise-constant delay needs one more value than breakpoints");
  }
  for (std::size_t k = 0; k < breakpoints.size(); ++k) {
    require_finite(breakpoints[k], "breakpoints must be finite");
    if (k > 0 && !(breakpoints[k] > breakpoints[k - 1])) {
      throw Error(ErrorCode::InvalidArgument, "breakpoints must be strictly increasing");
    }
  }
  for (double v : values) {
    require_finite(v, "delay values must be finite");
    if (v < 0.0) throw Error(ErrorCode::SignalViolatesBound, "delay must be nonnegative");
  }
  const double sup = *std::max_element(values.begin(), values.end());
  return DelaySignal(PiecewiseConstant{std::move(breakpoints), std::move(values)},
                     declared_or(bound, sup));
}

DelaySignal DelaySignal::sinusoidal(double center, double amplitude, double period, double phase,
                                    std::optional<double> bound) {
  require_finite(center, "sinusoid center must be finite");
  require_finite(amplitude, "sinusoid amplitude must be finite");
  require_finite(phase, "sinusoid phase must be finite");
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw Error(ErrorCode::InvalidArgument, "sinusoid period must be positive");
  }
  const double sup = std::max(0.0, center + std::abs(amplitude));
  return DelaySignal(Sinusoidal{center, amplitude, period, phase}, declared_or(bound, sup));
}

DelaySignal DelaySignal::sawtooth(double peak, double period) {
  require_finite(peak, "sawtooth peak must be finite");
  if (peak < 0.0) throw Error(ErrorCode::SignalViolatesBound, "delay must be nonnegative");
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw Error(ErrorCode::InvalidArgument, "sawtooth period must be positive");
  }
  return DelaySignal(Sawtooth{peak, period}, peak);
}

double DelaySignal::operator()(double t) const {
  return std::visit(
      Overloaded{
          [](const Constant& c) { return c.tau; },
          [t](const PiecewiseConstant& p) {
            const auto it = std::upper_bound(p.breakpoints.begin(), p.breakpoints.end(), t);
            return p.values[static_cast<std::size_t>(it - p.breakpoints.begin())];
          },
          [t](const Sinusoidal& s) {
            const double arg = 2.0 * std::numbers::pi * t / s.period + s.phase;
            return std::max(0.0, s.center + s.amplitude * std::sin(arg));
          },
          [t](const Sawtooth& s) {
            const double x = t / s.period;
            return s.peak * (x - std::floor(x));
          },
      },
      kind_);
}

std::string_view DelaySignal::kind_name() const noexcept {
  return std::visit(Overloaded{
                        [](const Constant&) -> std::string_view { return "constant"; },
                        [](const PiecewiseConstant&) -> std::string_view {
                          return "piecewise_constant";
                        },
                        [](const Sinusoidal&) -> std::string_view { return "sinusoidal"; },
                        [](const Sawtooth&) -> std::string_view { return "sawtooth"; },
                    },
                    kind_);
}

}  // namespace consensus

#pragma once

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace consensus {

/// A per-class communication delay tau(t) with a declared bound
/// sup_t tau(t). Values are sampled at solver stage times; the simulator
/// rejects samples outside [0, bound].
class DelaySignal {
 public:
  struct Constant {
    double tau = 0.0;
  };
  /// tau(t) = values[k] for breakpoints[k-1] <= t < breakpoints[k].
  struct PiecewiseConstant {
    std::vector<double> breakpoints;
    std::vector<double> values;  ///< breakpoints.size() + 1 entries
  };
  /// tau(t) = max(0, center + amplitude sin(2 pi t / period + phase)).
  struct Sinusoidal {
    double center = 0.0;
    double amplitude = 0.0;
    double period = 1.0;
    double phase = 0.0;
  };
  /// tau(t) = peak * frac(t / period): ramps up, then drops to zero.
  struct Sawtooth {
    double peak = 0.0;
    double period = 1.0;
  };
  using Kind = std::variant<Constant, PiecewiseConstant, Sinusoidal, Sawtooth>;

  static DelaySignal constant(double tau);
  static DelaySignal piecewise_constant(std::vector<double> breakpoints, std::vector<double> values,
                                        std::optional<double> bound = std::nullopt);
  static DelaySignal sinusoidal(double center, double amplitude, double period, double phase = 0.0,
                                std::optional<double> bound = std::nullopt);
  static DelaySignal sawtooth(double peak, double period);

  double operator()(double t) const;
  double bound() const noexcept { return bound_; }
  const Kind& kind() const noexcept { return kind_; }
  std::string_view kind_name() const noexcept;

 private:
  DelaySignal(Kind kind, double bound) : kind_(std::move(kind)), bound_(bound) {}

  Kind kind_;
  double bound_ = 0.0;
};

}  // namespace consensus

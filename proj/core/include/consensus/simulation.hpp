#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "consensus/delay_signal.hpp"
#include "consensus/graph.hpp"

namespace consensus {

/// Initial segment v(x, t) for t <= 0. States are stored agent-major:
/// element x * d + k is component k of agent x.
class InitialHistory {
 public:
  using Function = std::function<void(double t, std::span<double> out)>;

  /// Constant extension of the given per-agent values back in time.
  static InitialHistory constant(std::size_t agents, std::size_t state_dim,
                                 std::vector<double> values);
  /// Arbitrary continuous history; `f` fills all agents * state_dim entries.
  static InitialHistory from_function(std::size_t agents, std::size_t state_dim, Function f);

  void evaluate(double t, std::span<double> out) const;
  std::size_t agents() const noexcept { return agents_; }
  std::size_t state_dim() const noexcept { return dim_; }

 private:
  InitialHistory() = default;

  std::size_t agents_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> constant_;
  Function function_;
};

struct SimulationOptions {
  double horizon = 60.0;
  double h_step = 1e-3;
  /// Keep every k-th grid point in the trajectory (the last point is
  /// always kept).
  std::size_t record_stride = 1;
  /// Abort once the largest disagreement exceeds this value.
  std::optional<double> stop_above;
};

/// Time-sampled solution. Sample k holds time times[k], the full state
/// (agents * state_dim), the per-agent disagreement ||v(x,t) - vbar(0)||
/// and the agent average vbar(t).
struct Trajectory {
  std::size_t agents = 0;
  std::size_t state_dim = 0;
  double h_step = 0.0;
  double horizon = 0.0;
  double history_bound = 0.0;
  std::vector<double> times;
  std::vector<double> states;
  std::vector<double> disagreement;
  std::vector<double> average;
  std::vector<double> initial_average;
  /// Initial segment on [-history_bound, 0), at the recorded grid spacing.
  std::vector<double> history_times;
  std::vector<double> history_states;
  /// Integration stopped before the horizon (stop_above hit or non-finite state).
  bool stopped_early = false;

  std::size_t samples() const noexcept { return times.size(); }
  std::span<const double> state(std::size_t k) const;
  std::span<const double> disagreements(std::size_t k) const;
  std::span<const double> average_at(std::size_t k) const;
  double max_disagreement(std::size_t k) const;
};

/// Integrates dv/dt = sum_i L_i v(t - tau_i(t)) with fixed-step classical
/// RK4. Delayed states come from a ring buffer of grid states and
/// derivatives through cubic Hermite interpolation; lookups past the last
/// grid point extrapolate linearly with its derivative, and a zero delay
/// reads the current stage state.
///
/// `signals[i]` drives class i + 1. Throws StepTooLarge if h_step exceeds a
/// quarter of the smallest positive delay bound, SignalViolatesBound if a
/// sampled delay leaves [0, bound], InvalidArgument if the horizon is shorter
/// than 10 times the largest bound.
Trajectory simulate(const AgentGraph& g, std::span<const DelaySignal> signals,
                    const InitialHistory& initial, const SimulationOptions& options);

enum class Classification { Converged, Diverged, Inconclusive };

std::string_view to_string(Classification c) noexcept;

struct SimulationVerdict {
  Classification classification = Classification::Inconclusive;
  double final_disagreement = 0.0;
  std::optional<double> time_to_tolerance;
};

inline constexpr double kDefaultConvergenceTol = 1e-6;
inline constexpr double kDefaultDivergenceFactor = 1e3;

/// Diverged if the largest disagreement ever exceeds `div_threshold`
/// (default 1e3 times its initial value) or turns non-finite; Converged if
/// it stays below `conv_tol` over the last 10% of the horizon; otherwise
/// Inconclusive.
SimulationVerdict classify(const Trajectory& tr, double conv_tol = kDefaultConvergenceTol,
                           std::optional<double> div_threshold = std::nullopt);

/// max_t ||vbar(t) - vbar(0)|| over the recorded samples.
double average_drift(const Trajectory& tr);

/// Delay signals for every class, parameterised by their common bound.
/// `run` lets randomised families produce several signals per bound.
using SignalFamily = std::function<std::vector<DelaySignal>(double bound, std::size_t run)>;

SignalFamily uniform_constant_family(std::size_t classes);
/// center = amplitude = bound / 2.
SignalFamily uniform_sinusoidal_family(std::size_t classes, double period);
SignalFamily uniform_sawtooth_family(std::size_t classes, double period);

struct SweepOptions {
  SimulationOptions simulation;
  double conv_tol = kDefaultConvergenceTol;
  double divergence_factor = kDefaultDivergenceFactor;
  std::size_t runs_per_point = 1;
  std::size_t iterations = 12;
  double horizon_extension = 4.0;
};

struct Probe {
  double bound = 0.0;
  Classification verdict = Classification::Inconclusive;
  double final_disagreement = 0.0;

  bool diverged() const noexcept { return verdict == Classification::Diverged; }
};

/// Runs every member of the family at one bound. Diverged if any run
/// diverges. An inconclusive run is repeated once with the horizon
/// extended; if still inconclusive it counts on the converged side.
Probe probe_delay(const AgentGraph& g, const SignalFamily& family, const InitialHistory& initial,
                  double bound, const SweepOptions& options);

struct CriticalDelay {
  double estimate = 0.0;  ///< midpoint of the final bracket
  double lower = 0.0;
  double upper = 0.0;
  std::vector<Probe> probes;
};

/// Bisection on the converged/diverged outcome over [lo, hi]. Throws
/// NoSignChange if both ends land on the same side.
CriticalDelay empirical_critical_delay(const AgentGraph& g, const SignalFamily& family,
                                       const InitialHistory& initial, double lo, double hi,
                                       const SweepOptions& options);

}  // namespace consensus

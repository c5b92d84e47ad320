#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "consensus/bounds.hpp"
#include "consensus/delay_signal.hpp"
#include "consensus/graph.hpp"
#include "consensus/simulation.hpp"

namespace consensus {

/// Grid scan and bisection settings read from a scenario's "sweep" block.
struct SweepSpec {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t steps = 11;
  std::string kind = "constant";  ///< constant | sinusoidal | sawtooth, same signal on every class
  double period = 1.0;
  std::size_t runs = 1;
  std::optional<double> horizon;
  std::optional<double> h_step;
};

/// One scenario file: graph, per-class delays, initial condition and
/// simulation settings. JSON with the fields
///   n, d, edges [{u, v, w, class}], delays [{class, kind, ...}],
///   initial {values, slopes, constant_history}, horizon, h_step,
///   record_stride, conv_tol, div_factor, sweep {...}
/// Everything except n and edges is optional.
struct Scenario {
  AgentGraph graph;
  std::vector<DelaySignal> signals;  ///< empty when the file has no "delays"
  std::vector<double> initial_values;
  std::vector<double> initial_slopes;
  SimulationOptions simulation;
  double conv_tol = kDefaultConvergenceTol;
  double div_factor = kDefaultDivergenceFactor;
  std::optional<SweepSpec> sweep;

  /// Constant history by default; v(x, t) = values + slopes * t when slopes
  /// are given.
  InitialHistory initial_history() const;
};

AgentGraph parse_graph(std::string_view json_text);
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);

/// Agent x (1-based) starts at x in every component.
std::vector<double> ramp_initial_values(std::size_t agents, std::size_t state_dim);

std::string report_to_json(const MarginReport& report);
std::string verdict_to_json(const SimulationVerdict& verdict, double average_drift);

/// Header `t,agent,dim,value,disagreement`; agent and dim are 1-based.
void write_trajectory_csv(std::ostream& out, const Trajectory& tr);
/// Header `tau,verdict,final_disagreement`.
void write_sweep_csv(std::ostream& out, std::span<const Probe> probes);

/// Fixed, locale-independent number formatting used by every writer.
std::string format_number(double v);

}  // namespace consensus

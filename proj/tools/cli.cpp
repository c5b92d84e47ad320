#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "consensus/bounds.hpp"
#include "consensus/error.hpp"
#include "consensus/graph.hpp"
#include "consensus/io.hpp"
#include "consensus/simulation.hpp"
#include "consensus/spectral.hpp"

namespace consensus::cli {

namespace {

constexpr double kCrosscheckTol = 1e-9;

struct Options {
  std::string scenario;
  std::string out_dir;
  std::string norm_mode = "radius";
  std::vector<std::size_t> zero_classes;
  std::string family;
  std::size_t n = 0;
  double delta = 1.0;
  // crosscheck
  std::size_t n_min = 0;
  std::size_t n_max = 0;
  // sweep
  std::optional<double> tau_min;
  std::optional<double> tau_max;
  std::optional<std::size_t> steps;
  std::optional<std::string> kind;
  std::optional<double> h_step;
  std::optional<double> horizon;
};

NormMode parse_norm_mode(const std::string& s) {
  return s == "two-norm" ? NormMode::operator_two_norm : NormMode::spectral_radius;
}

GraphFamily parse_family(const std::string& s) {
  return s == "loop" ? GraphFamily::loop : GraphFamily::complete;
}

AgentGraph family_graph(GraphFamily f, std::size_t n, double delta) {
  return f == GraphFamily::complete ? complete_graph(n, delta, ClassLayout::per_edge)
                                    : loop_graph(n, delta, ClassLayout::per_edge);
}

/// Scenario from --scenario, or a uniformly weighted family graph.
Scenario resolve_scenario(const Options& opt) {
  if (!opt.scenario.empty()) return load_scenario(opt.scenario);
  if (opt.family.empty() || opt.n == 0) {
    throw Error(ErrorCode::InvalidArgument, "give --scenario <path> or --family {complete,loop} --n <N>");
  }
  Scenario sc{family_graph(parse_family(opt.family), opt.n, opt.delta)};
  return sc;
}

std::filesystem::path out_path(const Options& opt, const char* file) {
  std::filesystem::create_directories(opt.out_dir);
  return std::filesystem::path(opt.out_dir) / file;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  f << text;
}

void print_report(std::ostream& out, const MarginReport& r) {
  out << "constant uniform delay:          stable for tau_bar < " << format_number(r.constant_uniform) << '\n'
      << "constant non-uniform delays:     stable for tau_bar < " << format_number(r.constant_nonuniform) << '\n'
      << "time-varying uniform delay:      stable for tau_bar < " << format_number(r.timevarying_uniform) << '\n'
      << "time-varying non-uniform delays: stable for tau_bar < " << format_number(r.timevarying_nonuniform)
      << "  (sufficient; " << to_string(r.norm_mode) << ")\n";
  for (const auto& m : r.decay_margins)
    out << "decay rate h=" << format_number(m.rate) << ": tau_bar_h = " << format_number(m.tau) << '\n';
  for (const auto& [cls, v] : r.delay_independent)
    out << "delay-independent with class " << cls << " undelayed: " << to_string(v) << '\n';
}

int cmd_bounds(const Options& opt, std::ostream& out) {
  const Scenario sc = resolve_scenario(opt);
  const AgentGraph& g = sc.graph;
  const SpectralSummary s = spectral_summary(g);

  std::vector<double> rates;
  for (int k = 0; k <= 10; ++k) rates.push_back(s.norm_delta * k / 10.0);
  rates.back() = s.norm_delta;
  const MarginReport report = margin_report(g, parse_norm_mode(opt.norm_mode), rates, opt.zero_classes);

  out << "agents " << g.agents() << ", state dimension " << g.state_dim() << ", delay classes "
      << g.class_count() << '\n';
  out << "eigenvalues on zero-average states:";
  for (double e : s.eigenvalues_h1) out << ' ' << format_number(e);
  out << "  (each x" << s.multiplicity << ")\n";
  out << "||Delta|| = " << format_number(s.norm_delta) << ", ||Delta^-1||^-1 = "
      << format_number(s.norm_delta_inv_inv) << '\n';
  print_report(out, report);

  if (opt.scenario.empty()) {
    const MarginReport closed = closed_form_margins(parse_family(opt.family), opt.n, opt.delta);
    out << "closed form (" << opt.family << ", N=" << opt.n << ", delta=" << format_number(opt.delta) << "):\n";
    print_report(out, closed);
  }
  if (!opt.out_dir.empty()) write_file(out_path(opt, "margins.json"), report_to_json(report));
  return kOk;
}

int cmd_simulate(const Options& opt, std::ostream& out) {
  if (opt.scenario.empty()) throw Error(ErrorCode::InvalidArgument, "simulate needs --scenario <path>");
  Scenario sc = load_scenario(opt.scenario);
  if (sc.signals.empty()) throw Error(ErrorCode::InvalidArgument, "scenario has no \"delays\" block");
  if (opt.h_step) sc.simulation.h_step = *opt.h_step;
  if (opt.horizon) sc.simulation.horizon = *opt.horizon;

  const Trajectory tr = simulate(sc.graph, sc.signals, sc.initial_history(), sc.simulation);
  const double threshold = sc.div_factor * tr.max_disagreement(0);
  const SimulationVerdict v = classify(tr, sc.conv_tol, threshold);
  const double drift = average_drift(tr);

  out << "classification: " << to_string(v.classification) << '\n'
      << "final disagreement: " << format_number(v.final_disagreement) << '\n'
      << "time to tolerance: " << (v.time_to_tolerance ? format_number(*v.time_to_tolerance) : "n/a") << '\n'
      << "average drift: " << format_number(drift) << '\n';
  if (!opt.out_dir.empty()) {
    std::ofstream csv(out_path(opt, "trajectory.csv"));
    write_trajectory_csv(csv, tr);
    write_file(out_path(opt, "verdict.json"), verdict_to_json(v, drift));
  }
  return kOk;
}

int cmd_sweep(const Options& opt, std::ostream& out) {
  const Scenario sc = resolve_scenario(opt);
  const AgentGraph& g = sc.graph;
  SweepSpec spec = sc.sweep.value_or(SweepSpec{});
  if (opt.tau_min) spec.lo = *opt.tau_min;
  if (opt.tau_max) spec.hi = *opt.tau_max;
  if (opt.steps) spec.steps = *opt.steps;
  if (opt.kind) spec.kind = *opt.kind;
  if (!(spec.hi > spec.lo) || spec.lo < 0.0 || spec.steps < 2) {
    throw Error(ErrorCode::InvalidArgument, "sweep needs 0 <= --tau-min < --tau-max and --steps >= 2");
  }

  SweepOptions so;
  so.conv_tol = sc.conv_tol;
  so.divergence_factor = sc.div_factor;
  so.runs_per_point = spec.runs;
  so.simulation.record_stride = 10;
  double h = 0.01;
  if (spec.lo > 0.0) h = std::min(h, spec.lo / 4.0);
  so.simulation.h_step = opt.h_step.value_or(spec.h_step.value_or(opt.scenario.empty() ? h : sc.simulation.h_step));
  so.simulation.horizon = opt.horizon.value_or(spec.horizon.value_or(std::max(100.0, 10.0 * spec.hi)));

  SignalFamily family;
  if (spec.kind == "sinusoidal") {
    family = uniform_sinusoidal_family(g.class_count(), spec.period);
  } else if (spec.kind == "sawtooth") {
    family = uniform_sawtooth_family(g.class_count(), spec.period);
  } else if (spec.kind == "constant") {
    family = uniform_constant_family(g.class_count());
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown sweep kind '" + spec.kind + "'");
  }
  const InitialHistory initial = sc.initial_history();

  std::vector<Probe> probes;
  for (std::size_t k = 0; k < spec.steps; ++k) {
    const double tau = spec.lo + (spec.hi - spec.lo) * static_cast<double>(k) / static_cast<double>(spec.steps - 1);
    probes.push_back(probe_delay(g, family, initial, tau, so));
    out << "tau " << format_number(tau) << ": " << to_string(probes.back().verdict) << '\n';
  }

  auto write_csv = [&](std::vector<Probe> all) {
    if (opt.out_dir.empty()) return;
    std::stable_sort(all.begin(), all.end(), [](const Probe& a, const Probe& b) { return a.bound < b.bound; });
    std::ofstream csv(out_path(opt, "sweep.csv"));
    write_sweep_csv(csv, all);
  };

  std::size_t change = probes.size();
  for (std::size_t k = 0; k + 1 < probes.size(); ++k) {
    if (probes[k].diverged() != probes[k + 1].diverged()) {
      change = k;
      break;
    }
  }
  if (change == probes.size()) {
    write_csv(probes);
    throw Error(ErrorCode::NoSignChange,
                probes.front().diverged() ? "every probe diverged; lower --tau-min"
                                          : "no probe diverged in the interval; raise --tau-max");
  }

  const CriticalDelay crit =
      empirical_critical_delay(g, family, initial, probes[change].bound, probes[change + 1].bound, so);
  for (std::size_t k = 2; k < crit.probes.size(); ++k) probes.push_back(crit.probes[k]);
  write_csv(probes);
  out << "empirical critical delay: " << format_number(crit.estimate) << "  (bracket ["
      << format_number(crit.lower) << ", " << format_number(crit.upper) << "])\n";
  return kOk;
}

int cmd_crosscheck(const Options& opt, std::ostream& out) {
  if (opt.family.empty()) throw Error(ErrorCode::InvalidArgument, "crosscheck needs --family {complete,loop}");
  const GraphFamily family = parse_family(opt.family);
  std::size_t lo = family == GraphFamily::complete ? 2 : 3;
  std::size_t hi = family == GraphFamily::complete ? 12 : 24;
  if (opt.n != 0) lo = hi = opt.n;
  if (opt.n_min != 0) lo = opt.n_min;
  if (opt.n_max != 0) hi = opt.n_max;
  if (lo > hi) throw Error(ErrorCode::InvalidArgument, "empty N range");

  double worst = 0.0;
  bool ok = true;
  out << "N  constant_uniform  timevarying_uniform  timevarying_nonuniform  max_rel_err  result\n";
  for (std::size_t n = lo; n <= hi; ++n) {
    const MarginReport closed = closed_form_margins(family, n, opt.delta);
    const MarginReport numeric = margin_report(family_graph(family, n, opt.delta), NormMode::spectral_radius);
    const auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
    const double err = std::max({rel(numeric.constant_uniform, closed.constant_uniform),
                                 rel(numeric.constant_nonuniform, closed.constant_nonuniform),
                                 rel(numeric.timevarying_uniform, closed.timevarying_uniform),
                                 rel(numeric.timevarying_nonuniform, closed.timevarying_nonuniform)});
    worst = std::max(worst, err);
    const bool pass = err <= kCrosscheckTol;
    ok = ok && pass;
    out << n << "  " << format_number(numeric.constant_uniform) << "  " << format_number(numeric.timevarying_uniform)
        << "  " << format_number(numeric.timevarying_nonuniform) << "  " << format_number(err) << "  "
        << (pass ? "pass" : "FAIL") << '\n';
  }
  out << "max relative error: " << format_number(worst) << '\n';
  return ok ? kOk : kCrosscheckFailed;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::GraphDisconnected: return kDisconnected;
    case ErrorCode::StepTooLarge: return kStepTooLarge;
    case ErrorCode::NoSignChange: return kNoSignChange;
    default: return kFailure;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Delay margins and simulation of average-consensus networks", "consensus-delay"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--scenario", opt.scenario, "Scenario file (JSON)");
  app.add_option("--out", opt.out_dir, "Directory for report / CSV output");
  app.add_option("--norm-mode", opt.norm_mode, "Product norm convention")
      ->check(CLI::IsMember({"radius", "two-norm"}));
  app.add_option("--zero-class", opt.zero_classes, "Class assumed delay-free for the delay-independent check");
  app.add_option("--family", opt.family, "Built-in graph family")->check(CLI::IsMember({"complete", "loop"}));
  app.add_option("--n", opt.n, "Number of agents for --family");
  app.add_option("--delta", opt.delta, "Uniform edge weight for --family")->check(CLI::PositiveNumber);

  auto* bounds = app.add_subcommand("bounds", "Delay margins from the Laplacian spectrum");
  auto* simulate_cmd = app.add_subcommand("simulate", "Integrate the delayed dynamics of a scenario");
  auto* sweep = app.add_subcommand("sweep", "Scan a delay bound and bisect the stability boundary");
  auto* crosscheck = app.add_subcommand("crosscheck", "Compare closed forms with the numeric pipeline");

  for (auto* sub : {simulate_cmd, sweep}) {
    sub->add_option("--h-step", opt.h_step, "Integration step")->check(CLI::PositiveNumber);
    sub->add_option("--horizon", opt.horizon, "Simulated time")->check(CLI::PositiveNumber);
  }
  sweep->add_option("--tau-min", opt.tau_min, "Lower end of the delay interval");
  sweep->add_option("--tau-max", opt.tau_max, "Upper end of the delay interval");
  sweep->add_option("--steps", opt.steps, "Grid points before bisection");
  sweep->add_option("--kind", opt.kind, "Signal shape")->check(CLI::IsMember({"constant", "sinusoidal", "sawtooth"}));
  crosscheck->add_option("--n-min", opt.n_min, "Smallest N");
  crosscheck->add_option("--n-max", opt.n_max, "Largest N");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*bounds) return cmd_bounds(opt, out);
    if (*simulate_cmd) return cmd_simulate(opt, out);
    if (*sweep) return cmd_sweep(opt, out);
    if (*crosscheck) return cmd_crosscheck(opt, out);
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    err << "error: " << code << ' ' << to_string(e.code()) << ": " << e.what() << '\n';
    return code;
  } catch (const std::exception& e) {
    err << "error: " << kFailure << " InternalError: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace consensus::cli

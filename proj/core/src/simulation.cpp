#include "consensus/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "consensus/error.hpp"

namespace consensus {

InitialHistory InitialHistory::constant(std::size_t agents, std::size_t state_dim,
                                        std::vector<double> values) {
  if (values.size() != agents * state_dim) {
    throw Error(ErrorCode::DimensionMismatch, "initial values must hold agents * state_dim entries");
  }
  InitialHistory h;
  h.agents_ = agents;
  h.dim_ = state_dim;
  h.constant_ = std::move(values);
  return h;
}

InitialHistory InitialHistory::from_function(std::size_t agents, std::size_t state_dim,
                                             Function f) {
  if (!f) throw Error(ErrorCode::InvalidArgument, "history function is empty");
  InitialHistory h;
  h.agents_ = agents;
  h.dim_ = state_dim;
  h.function_ = std::move(f);
  return h;
}

void InitialHistory::evaluate(double t, std::span<double> out) const {
  if (function_) {
    function_(t, out);
  } else {
    std::copy(constant_.begin(), constant_.end(), out.begin());
  }
}

std::span<const double> Trajectory::state(std::size_t k) const {
  const std::size_t nd = agents * state_dim;
  return {states.data() + k * nd, nd};
}

std::span<const double> Trajectory::disagreements(std::size_t k) const {
  return {disagreement.data() + k * agents, agents};
}

std::span<const double> Trajectory::average_at(std::size_t k) const {
  return {average.data() + k * state_dim, state_dim};
}

double Trajectory::max_disagreement(std::size_t k) const {
  const auto d = disagreements(k);
  double m = 0.0;
  for (double v : d) {
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    m = std::max(m, v);
  }
  return m;
}

namespace {

/// Grid states and derivatives for the last `capacity` steps.
class HistoryBuffer {
 public:
  HistoryBuffer(std::size_t capacity, std::size_t width, double h)
      : capacity_(capacity), width_(width), h_(h),
        states_(capacity * width), derivs_(capacity * width) {}

  void push_state(std::size_t k, std::span<const double> y) {
    latest_ = k;
    derivative_known_ = false;
    std::copy(y.begin(), y.end(), slot(states_, k).begin());
  }

  void set_derivative(std::span<const double> f) {
    std::copy(f.begin(), f.end(), slot(derivs_, latest_).begin());
    derivative_known_ = true;
  }

  /// State at time s, with 0 < s. Requires s >= t_latest - (capacity - 2) h.
  void lookup(double s, std::span<double> out) const {
    const double t_latest = static_cast<double>(latest_) * h_;
    const auto y_k = slot(states_, latest_);
    if (s >= t_latest) {
      const double dt = s - t_latest;
      const auto f_k = slot(derivs_, latest_);
      for (std::size_t i = 0; i < width_; ++i)
        out[i] = derivative_known_ ? y_k[i] + dt * f_k[i] : y_k[i];
      return;
    }
    auto j = static_cast<std::size_t>(std::floor(s / h_));
    if (j >= latest_) j = latest_ - 1;
    if (latest_ - j >= capacity_) {
      throw Error(ErrorCode::SignalViolatesBound, "delayed lookup reaches past the history buffer");
    }
    const double theta = (s - static_cast<double>(j) * h_) / h_;
    const auto y0 = slot(states_, j);
    const auto f0 = slot(derivs_, j);
    const auto y1 = slot(states_, j + 1);
    if (j + 1 == latest_ && !derivative_known_) {
      // Derivative at the newest grid point is not known yet: quadratic
      // through y0, f0, y1.
      const double t2 = theta * theta;
      for (std::size_t i = 0; i < width_; ++i)
        out[i] = y0[i] + theta * h_ * f0[i] + t2 * (y1[i] - y0[i] - h_ * f0[i]);
      return;
    }
    const auto f1 = slot(derivs_, j + 1);
    const double t2 = theta * theta;
    const double t3 = t2 * theta;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + theta;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    for (std::size_t i = 0; i < width_; ++i)
      out[i] = h00 * y0[i] + h10 * h_ * f0[i] + h01 * y1[i] + h11 * h_ * f1[i];
  }

 private:
  std::span<double> slot(std::vector<double>& v, std::size_t k) {
    return {v.data() + (k % capacity_) * width_, width_};
  }
  std::span<const double> slot(const std::vector<double>& v, std::size_t k) const {
    return {v.data() + (k % capacity_) * width_, width_};
  }

  std::size_t capacity_;
  std::size_t width_;
  double h_;
  std::vector<double> states_;
  std::vector<double> derivs_;
  std::size_t latest_ = 0;
  bool derivative_known_ = false;
};

class DelayedRhs {
 public:
  DelayedRhs(const AgentGraph& g, std::span<const DelaySignal> signals,
             const InitialHistory& initial, const HistoryBuffer& buffer)
      : d_(g.state_dim()), signals_(signals), initial_(initial), buffer_(buffer),
        scratch_(g.agents() * g.state_dim()) {
    classes_.resize(g.class_count());
    for (const auto& e : g.edges()) classes_[e.delay_class - 1].push_back(e);
  }

  void operator()(double t, std::span<const double> stage, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      const DelaySignal& sig = signals_[c];
      const double tau = sig(t);
      if (!(tau >= 0.0) || tau > sig.bound() * (1.0 + 1e-12) + 1e-15) {
        throw Error(ErrorCode::SignalViolatesBound,
                    "delay of class " + std::to_string(c + 1) + " sampled at t=" +
                        std::to_string(t) + " is outside [0, " + std::to_string(sig.bound()) +
                        "]");
      }
      std::span<const double> src = stage;
      if (tau > 0.0) {
        const double s = t - tau;
        if (s <= 0.0) {
          initial_.evaluate(s, scratch_);
        } else {
          buffer_.lookup(s, scratch_);
        }
        src = scratch_;
      }
      for (const Edge& e : classes_[c]) {
        const std::size_t a = e.a * d_;
        const std::size_t b = e.b * d_;
        for (std::size_t k = 0; k < d_; ++k) {
          const double flow = e.weight * (src[b + k] - src[a + k]);
          out[a + k] += flow;
          out[b + k] -= flow;
        }
      }
    }
  }

 private:
  std::size_t d_;
  std::span<const DelaySignal> signals_;
  const InitialHistory& initial_;
  const HistoryBuffer& buffer_;
  std::vector<std::vector<Edge>> classes_;
  std::vector<double> scratch_;
};

void record(Trajectory& tr, double t, std::span<const double> y) {
  const std::size_t n = tr.agents;
  const std::size_t d = tr.state_dim;
  tr.times.push_back(t);
  tr.states.insert(tr.states.end(), y.begin(), y.end());
  std::vector<double> avg(d, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    double sq = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = y[x * d + k] - tr.initial_average[k];
      sq += diff * diff;
      avg[k] += y[x * d + k];
    }
    tr.disagreement.push_back(std::sqrt(sq));
  }
  for (double& a : avg) tr.average.push_back(a / static_cast<double>(n));
}

}  // namespace

Trajectory simulate(const AgentGraph& g, std::span<const DelaySignal> signals,
                    const InitialHistory& initial, const SimulationOptions& options) {
  const std::size_t n = g.agents();
  const std::size_t d = g.state_dim();
  const std::size_t nd = n * d;
  if (signals.size() != g.class_count()) {
    throw Error(ErrorCode::InvalidArgument, "need one delay signal per class: got " +
                                                std::to_string(signals.size()) + ", expected " +
                                                std::to_string(g.class_count()));
  }
  if (initial.agents() != n || initial.state_dim() != d) {
    throw Error(ErrorCode::DimensionMismatch, "initial history does not match the graph");
  }
  if (!(options.h_step > 0.0) || !(options.horizon > 0.0) || options.record_stride == 0) {
    throw Error(ErrorCode::InvalidArgument, "h_step, horizon and record_stride must be positive");
  }

  double max_bound = 0.0;
  double min_positive = std::numeric_limits<double>::infinity();
  for (const auto& sig : signals) {
    max_bound = std::max(max_bound, sig.bound());
    if (sig.bound() > 0.0) min_positive = std::min(min_positive, sig.bound());
  }
  if (std::isfinite(min_positive) && options.h_step > min_positive / 4.0) {
    throw Error(ErrorCode::StepTooLarge,
                "h_step " + std::to_string(options.h_step) +
                    " exceeds a quarter of the smallest delay bound " +
                    std::to_string(min_positive));
  }
  if (options.horizon < 10.0 * max_bound) {
    throw Error(ErrorCode::InvalidArgument, "horizon must be at least 10 times the largest delay bound");
  }

  const double h = options.h_step;
  const auto steps = static_cast<std::size_t>(std::ceil(options.horizon / h - 1e-9));
  const auto capacity = static_cast<std::size_t>(std::ceil(max_bound / h)) + 4;

  Trajectory tr;
  tr.agents = n;
  tr.state_dim = d;
  tr.h_step = h;
  tr.horizon = static_cast<double>(steps) * h;
  tr.history_bound = max_bound;

  std::vector<double> y(nd);
  initial.evaluate(0.0, y);
  tr.initial_average.assign(d, 0.0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t k = 0; k < d; ++k) tr.initial_average[k] += y[x * d + k];
  for (double& a : tr.initial_average) a /= static_cast<double>(n);

  const double history_dt = h * static_cast<double>(options.record_stride);
  std::vector<double> past(nd);
  for (auto m = static_cast<std::size_t>(std::ceil(max_bound / history_dt)); m >= 1; --m) {
    const double t = -static_cast<double>(m) * history_dt;
    initial.evaluate(t, past);
    tr.history_times.push_back(t);
    tr.history_states.insert(tr.history_states.end(), past.begin(), past.end());
  }

  const std::size_t expected = steps / options.record_stride + 2;
  tr.times.reserve(expected);
  tr.states.reserve(expected * nd);
  tr.disagreement.reserve(expected * n);
  tr.average.reserve(expected * d);
  record(tr, 0.0, y);

  HistoryBuffer buffer(capacity, nd, h);
  DelayedRhs rhs(g, signals, initial, buffer);
  std::vector<double> k1(nd), k2(nd), k3(nd), k4(nd), stage(nd);

  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * h;
    buffer.push_state(k, y);
    rhs(t, y, k1);
    buffer.set_derivative(k1);
    for (std::size_t i = 0; i < nd; ++i) stage[i] = y[i] + 0.5 * h * k1[i];
    rhs(t + 0.5 * h, stage, k2);
    for (std::size_t i = 0; i < nd; ++i) stage[i] = y[i] + 0.5 * h * k2[i];
    rhs(t + 0.5 * h, stage, k3);
    for (std::size_t i = 0; i < nd; ++i) stage[i] = y[i] + h * k3[i];
    rhs(t + h, stage, k4);
    for (std::size_t i = 0; i < nd; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    const bool last = k + 1 == steps;
    bool finite = true;
    for (double v : y) finite = finite && std::isfinite(v);
    if ((k + 1) % options.record_stride == 0 || last || !finite) {
      record(tr, static_cast<double>(k + 1) * h, y);
      const double worst = tr.max_disagreement(tr.samples() - 1);
      if (!finite || (options.stop_above && worst > *options.stop_above)) {
        tr.stopped_early = !last;
        break;
      }
    }
  }
  return tr;
}

std::string_view to_string(Classification c) noexcept {
  switch (c) {
    case Classification::Converged: return "Converged";
    case Classification::Diverged: return "Diverged";
    case Classification::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

SimulationVerdict classify(const Trajectory& tr, double conv_tol,
                           std::optional<double> div_threshold) {
  SimulationVerdict v;
  if (tr.samples() == 0) return v;
  const std::size_t last = tr.samples() - 1;
  v.final_disagreement = tr.max_disagreement(last);

  const double threshold = div_threshold.value_or(kDefaultDivergenceFactor * tr.max_disagreement(0));
  for (std::size_t k = 0; k < tr.samples(); ++k) {
    const double m = tr.max_disagreement(k);
    if (!std::isfinite(m) || m > threshold) {
      v.classification = Classification::Diverged;
      return v;
    }
  }

  std::size_t settle = tr.samples();
  while (settle > 0 && tr.max_disagreement(settle - 1) < conv_tol) --settle;
  if (settle < tr.samples()) v.time_to_tolerance = tr.times[settle];

  if (tr.stopped_early) {
    v.classification = Classification::Inconclusive;
    return v;
  }
  const double window_start = 0.9 * tr.horizon;
  bool converged = true;
  for (std::size_t k = 0; k < tr.samples(); ++k)
    if (tr.times[k] >= window_start && !(tr.max_disagreement(k) < conv_tol)) converged = false;
  v.classification = converged ? Classification::Converged : Classification::Inconclusive;
  return v;
}

double average_drift(const Trajectory& tr) {
  double drift = 0.0;
  for (std::size_t k = 0; k < tr.samples(); ++k) {
    const auto avg = tr.average_at(k);
    double sq = 0.0;
    for (std::size_t i = 0; i < tr.state_dim; ++i) {
      const double diff = avg[i] - tr.initial_average[i];
      sq += diff * diff;
    }
    drift = std::max(drift, std::sqrt(sq));
  }
  return drift;
}

SignalFamily uniform_constant_family(std::size_t classes) {
  return [classes](double bound, std::size_t) {
    return std::vector<DelaySignal>(classes, DelaySignal::constant(bound));
  };
}

SignalFamily uniform_sinusoidal_family(std::size_t classes, double period) {
  return [classes, period](double bound, std::size_t) {
    return std::vector<DelaySignal>(
        classes, DelaySignal::sinusoidal(0.5 * bound, 0.5 * bound, period, 0.0, bound));
  };
}

SignalFamily uniform_sawtooth_family(std::size_t classes, double period) {
  return [classes, period](double bound, std::size_t) {
    return std::vector<DelaySignal>(classes, DelaySignal::sawtooth(bound, period));
  };
}

Probe probe_delay(const AgentGraph& g, const SignalFamily& family, const InitialHistory& initial,
                  double bound, const SweepOptions& options) {
  std::vector<double> y0(g.agents() * g.state_dim());
  initial.evaluate(0.0, y0);
  // Same reference the trajectory uses: distance to the initial average.
  const std::size_t d = g.state_dim();
  std::vector<double> avg(d, 0.0);
  for (std::size_t x = 0; x < g.agents(); ++x)
    for (std::size_t k = 0; k < d; ++k) avg[k] += y0[x * d + k] / static_cast<double>(g.agents());
  double initial_disagreement = 0.0;
  for (std::size_t x = 0; x < g.agents(); ++x) {
    double sq = 0.0;
    for (std::size_t k = 0; k < d; ++k) sq += (y0[x * d + k] - avg[k]) * (y0[x * d + k] - avg[k]);
    initial_disagreement = std::max(initial_disagreement, std::sqrt(sq));
  }
  const double threshold = options.divergence_factor * initial_disagreement;

  Probe probe{bound, Classification::Converged, 0.0};
  for (std::size_t run = 0; run < std::max<std::size_t>(1, options.runs_per_point); ++run) {
    const auto signals = family(bound, run);
    SimulationOptions sim = options.simulation;
    sim.stop_above = threshold;
    auto verdict = classify(simulate(g, signals, initial, sim), options.conv_tol, threshold);
    if (verdict.classification == Classification::Inconclusive) {
      sim.horizon *= options.horizon_extension;
      verdict = classify(simulate(g, signals, initial, sim), options.conv_tol, threshold);
    }
    probe.final_disagreement = std::max(probe.final_disagreement, verdict.final_disagreement);
    if (verdict.classification == Classification::Diverged) {
      probe.verdict = Classification::Diverged;
      break;
    }
    if (verdict.classification == Classification::Inconclusive) probe.verdict = Classification::Inconclusive;
  }
  return probe;
}

CriticalDelay empirical_critical_delay(const AgentGraph& g, const SignalFamily& family,
                                       const InitialHistory& initial, double lo, double hi,
                                       const SweepOptions& options) {
  if (!(lo < hi) || lo < 0.0) throw Error(ErrorCode::InvalidArgument, "search interval must satisfy 0 <= lo < hi");
  CriticalDelay result;
  const Probe lower = probe_delay(g, family, initial, lo, options);
  const Probe upper = probe_delay(g, family, initial, hi, options);
  result.probes = {lower, upper};
  if (lower.diverged() == upper.diverged()) {
    throw Error(ErrorCode::NoSignChange,
                std::string("both ends of [") + std::to_string(lo) + ", " + std::to_string(hi) +
                    "] are " + (lower.diverged() ? "divergent" : "non-divergent"));
  }
  const bool hi_diverged = upper.diverged();
  for (std::size_t it = 0; it < options.iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    const Probe p = probe_delay(g, family, initial, mid, options);
    result.probes.push_back(p);
    if (p.diverged() == hi_diverged) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  result.lower = lo;
  result.upper = hi;
  result.estimate = 0.5 * (lo + hi);
  return result;
}

}  // namespace consensus

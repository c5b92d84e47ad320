#include "consensus/io.hpp"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "consensus/error.hpp"

namespace consensus {

using nlohmann::json;

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

template <class T>
T field(const json& j, const char* name) {
  if (!j.contains(name)) throw Error(ErrorCode::ParseError, std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("field '") + name + "': " + e.what());
  }
}

template <class T>
T field_or(const json& j, const char* name, T fallback) {
  return j.contains(name) ? field<T>(j, name) : fallback;
}

double positive(const json& j, const char* name, double fallback) {
  const double v = field_or<double>(j, name, fallback);
  if (!(v > 0.0)) throw Error(ErrorCode::ParseError, std::string("field '") + name + "' must be positive");
  return v;
}

AgentGraph graph_from(const json& j) {
  const auto n = field<std::size_t>(j, "n");
  const auto d = field_or<std::size_t>(j, "d", 1);
  std::vector<EdgeSpec> edges;
  for (const auto& e : field<json>(j, "edges")) {
    edges.push_back({field<std::size_t>(e, "u"), field<std::size_t>(e, "v"),
                     field_or<double>(e, "w", 1.0), field_or<std::size_t>(e, "class", 1)});
  }
  return build_graph(n, d, edges);
}

DelaySignal signal_from(const json& s) {
  const auto kind = field<std::string>(s, "kind");
  std::optional<double> bound;
  if (s.contains("bound")) bound = field<double>(s, "bound");
  if (kind == "constant") return DelaySignal::constant(field<double>(s, "tau"));
  if (kind == "piecewise_constant") {
    return DelaySignal::piecewise_constant(field<std::vector<double>>(s, "breakpoints"),
                                           field<std::vector<double>>(s, "values"), bound);
  }
  if (kind == "sinusoidal") {
    return DelaySignal::sinusoidal(field<double>(s, "center"), field<double>(s, "amplitude"),
                                   field<double>(s, "period"), field_or<double>(s, "phase", 0.0),
                                   bound);
  }
  if (kind == "sawtooth") return DelaySignal::sawtooth(field<double>(s, "peak"), field<double>(s, "period"));
  throw Error(ErrorCode::ParseError, "unknown delay kind '" + kind + "'");
}

std::vector<double> flatten_agents(const json& rows, std::size_t n, std::size_t d, const char* what) {
  if (!rows.is_array() || rows.size() != n) {
    throw Error(ErrorCode::ParseError, std::string(what) + " must list one vector per agent");
  }
  std::vector<double> flat;
  flat.reserve(n * d);
  for (const auto& row : rows) {
    const auto v = row.get<std::vector<double>>();
    if (v.size() != d) throw Error(ErrorCode::ParseError, std::string(what) + " vectors must have d entries");
    flat.insert(flat.end(), v.begin(), v.end());
  }
  return flat;
}

}  // namespace

InitialHistory Scenario::initial_history() const {
  const std::size_t n = graph.agents();
  const std::size_t d = graph.state_dim();
  std::vector<double> values = initial_values.empty() ? ramp_initial_values(n, d) : initial_values;
  if (initial_slopes.empty()) return InitialHistory::constant(n, d, std::move(values));
  return InitialHistory::from_function(
      n, d, [values = std::move(values), slopes = initial_slopes](double t, std::span<double> out) {
        for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] + slopes[i] * t;
      });
}

AgentGraph parse_graph(std::string_view json_text) { return graph_from(parse_json(json_text)); }

Scenario parse_scenario(std::string_view json_text) {
  const json j = parse_json(json_text);
  Scenario sc{graph_from(j)};
  const std::size_t n = sc.graph.agents();
  const std::size_t d = sc.graph.state_dim();
  const std::size_t r = sc.graph.class_count();

  if (j.contains("delays")) {
    std::vector<std::optional<DelaySignal>> by_class(r);
    for (const auto& s : j.at("delays")) {
      const auto cls = field<std::size_t>(s, "class");
      if (cls < 1 || cls > r) {
        throw Error(ErrorCode::UnknownClass, "delay given for undeclared class " + std::to_string(cls));
      }
      if (by_class[cls - 1]) throw Error(ErrorCode::ParseError, "class " + std::to_string(cls) + " has two delays");
      by_class[cls - 1] = signal_from(s);
    }
    for (std::size_t c = 0; c < r; ++c) {
      if (!by_class[c]) throw Error(ErrorCode::ParseError, "no delay given for class " + std::to_string(c + 1));
      sc.signals.push_back(*by_class[c]);
    }
  }

  if (j.contains("initial")) {
    const json& init = j.at("initial");
    if (init.contains("values")) sc.initial_values = flatten_agents(init.at("values"), n, d, "initial.values");
    if (init.contains("slopes")) {
      if (field_or<bool>(init, "constant_history", false)) {
        throw Error(ErrorCode::ParseError, "initial.slopes conflicts with constant_history");
      }
      sc.initial_slopes = flatten_agents(init.at("slopes"), n, d, "initial.slopes");
      if (sc.initial_values.empty()) sc.initial_values = ramp_initial_values(n, d);
    }
  }

  sc.simulation.horizon = positive(j, "horizon", sc.simulation.horizon);
  sc.simulation.h_step = positive(j, "h_step", sc.simulation.h_step);
  sc.simulation.record_stride = field_or<std::size_t>(j, "record_stride", 1);
  if (sc.simulation.record_stride == 0) throw Error(ErrorCode::ParseError, "record_stride must be positive");
  sc.conv_tol = positive(j, "conv_tol", sc.conv_tol);
  sc.div_factor = positive(j, "div_factor", sc.div_factor);

  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    SweepSpec sw;
    const auto interval = field<std::vector<double>>(s, "interval");
    if (interval.size() != 2 || !(interval[0] >= 0.0) || !(interval[0] < interval[1])) {
      throw Error(ErrorCode::ParseError, "sweep.interval must be [lo, hi] with 0 <= lo < hi");
    }
    sw.lo = interval[0];
    sw.hi = interval[1];
    sw.steps = field_or<std::size_t>(s, "steps", sw.steps);
    if (sw.steps < 2) throw Error(ErrorCode::ParseError, "sweep.steps must be at least 2");
    sw.kind = field_or<std::string>(s, "kind", sw.kind);
    if (sw.kind != "constant" && sw.kind != "sinusoidal" && sw.kind != "sawtooth") {
      throw Error(ErrorCode::ParseError, "unknown sweep.kind '" + sw.kind + "'");
    }
    sw.period = positive(s, "period", sw.period);
    sw.runs = field_or<std::size_t>(s, "runs", sw.runs);
    if (s.contains("horizon")) sw.horizon = positive(s, "horizon", 1.0);
    if (s.contains("h_step")) sw.h_step = positive(s, "h_step", 1.0);
    sc.sweep = sw;
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open scenario file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::vector<double> ramp_initial_values(std::size_t agents, std::size_t state_dim) {
  std::vector<double> v(agents * state_dim);
  for (std::size_t x = 0; x < agents; ++x)
    for (std::size_t k = 0; k < state_dim; ++k) v[x * state_dim + k] = static_cast<double>(x + 1);
  return v;
}

std::string report_to_json(const MarginReport& report) {
  json j;
  j["constant_uniform"] = report.constant_uniform;
  j["timevarying_uniform"] = report.timevarying_uniform;
  j["constant_nonuniform"] = report.constant_nonuniform;
  j["timevarying_nonuniform"] = report.timevarying_nonuniform;
  j["norm_mode"] = std::string(to_string(report.norm_mode));
  j["decay_margins"] = json::array();
  for (const auto& m : report.decay_margins) j["decay_margins"].push_back({{"h", m.rate}, {"tau", m.tau}});
  j["delay_independent"] = json::object();
  for (const auto& [cls, verdict] : report.delay_independent)
    j["delay_independent"][std::to_string(cls)] = std::string(to_string(verdict));
  return j.dump(2) + "\n";
}

std::string verdict_to_json(const SimulationVerdict& verdict, double drift) {
  json j;
  j["classification"] = std::string(to_string(verdict.classification));
  j["final_disagreement"] = verdict.final_disagreement;
  j["time_to_tolerance"] = verdict.time_to_tolerance ? json(*verdict.time_to_tolerance) : json(nullptr);
  j["average_drift"] = drift;
  return j.dump(2) + "\n";
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
  out << "t,agent,dim,value,disagreement\n";
  for (std::size_t k = 0; k < tr.samples(); ++k) {
    const auto state = tr.state(k);
    const auto dis = tr.disagreements(k);
    const std::string t = format_number(tr.times[k]);
    for (std::size_t x = 0; x < tr.agents; ++x) {
      const std::string q = format_number(dis[x]);
      for (std::size_t c = 0; c < tr.state_dim; ++c) {
        out << t << ',' << x + 1 << ',' << c + 1 << ',' << format_number(state[x * tr.state_dim + c])
            << ',' << q << '\n';
      }
    }
  }
}

void write_sweep_csv(std::ostream& out, std::span<const Probe> probes) {
  out << "tau,verdict,final_disagreement\n";
  for (const auto& p : probes)
    out << format_number(p.bound) << ',' << to_string(p.verdict) << ',' << format_number(p.final_disagreement)
        << '\n';
}

}  // namespace consensus

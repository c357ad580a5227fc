#include "sdde/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace sdde {

using nlohmann::json;

const char* kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::simulate: return "simulate";
    case ExperimentKind::couple: return "couple";
    case ExperimentKind::approx_study: return "approx-study";
    case ExperimentKind::support_probe: return "support-probe";
    case ExperimentKind::ergodic: return "ergodic";
    case ExperimentKind::sensitivity: return "sensitivity";
    case ExperimentKind::tailcheck: return "tailcheck";
  }
  return "?";
}

Segment SegmentSpec::build(const TimeGrid& grid) const {
  if (constant) return Segment::constant(grid, *constant);
  const auto coeff = polynomial;
  return Segment::sampled(grid, 1, [&coeff](double t, std::span<double> out) {
    double v = 0.0;
    for (auto it = coeff.rbegin(); it != coeff.rend(); ++it) v = v * t + *it;
    out[0] = v;
  });
}

namespace {

// Reads the fields of one JSON object and remembers which keys were consumed,
// so leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError("field '" + label() + "' must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    if (!has(key)) return required(key, fallback);
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError("field '" + field(key) + "' must be a number");
    return v.get<double>();
  }

  std::size_t count(const std::string& key, std::optional<std::size_t> fallback = std::nullopt) {
    if (!has(key)) {
      if (!fallback) throw ConfigError("missing required field '" + field(key) + "'");
      return *fallback;
    }
    const json& v = raw(key);
    if (!v.is_number_unsigned()) throw ConfigError("field '" + field(key) + "' must be a non-negative integer");
    return v.get<std::size_t>();
  }

  std::uint64_t u64(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_unsigned()) throw ConfigError("field '" + field(key) + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
  }

  std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    if (!has(key)) {
      if (!fallback) throw ConfigError("missing required field '" + field(key) + "'");
      return *fallback;
    }
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError("field '" + field(key) + "' must be a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_array() || v.empty()) throw ConfigError("field '" + field(key) + "' must be a nonempty array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError("field '" + field(key) + "' must be a nonempty array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  void finish(const std::set<std::string>& allowed = {}) const {
    for (const auto& [key, value] : j_.items()) {
      const bool ok = seen_.count(key) && (allowed.empty() || allowed.count(key));
      if (!ok) throw ConfigError("unknown key '" + field(key) + "'");
    }
  }

 private:
  double required(const std::string& key, std::optional<double> fallback) const {
    if (!fallback) throw ConfigError("missing required field '" + field(key) + "'");
    return *fallback;
  }
  std::string label() const { return path_.empty() ? "<root>" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

ExperimentKind parse_kind(const std::string& s) {
  for (auto k : {ExperimentKind::simulate, ExperimentKind::couple, ExperimentKind::approx_study,
                 ExperimentKind::support_probe, ExperimentKind::ergodic, ExperimentKind::sensitivity,
                 ExperimentKind::tailcheck}) {
    if (s == kind_name(k)) return k;
  }
  throw ConfigError("field 'kind' has unknown value '" + s + "'");
}

SegmentSpec parse_segment(const json& j, const std::string& path) {
  SegmentSpec spec;
  if (j.is_number()) {
    spec.constant = j.get<double>();
    return spec;
  }
  ObjectReader r(j, path);
  if (r.has("constant") == r.has("polynomial"))
    throw ConfigError("field '" + path + "' needs exactly one of 'constant' or 'polynomial'");
  if (r.has("constant")) {
    spec.constant = r.number("constant");
  } else {
    spec.polynomial = r.numbers("polynomial", {});
  }
  r.finish();
  return spec;
}

const std::map<ExperimentKind, std::set<std::string>>& estimator_keys() {
  static const std::map<ExperimentKind, std::set<std::string>> keys = {
      {ExperimentKind::simulate, {"paths", "record_every"}},
      {ExperimentKind::couple, {"paths", "mode", "gamma", "threshold_mult", "h", "theta", "N"}},
      {ExperimentKind::approx_study, {"paths", "eps", "gamma"}},
      {ExperimentKind::support_probe, {"paths", "h", "delta", "lambda", "log_n_min", "log_n_max", "n_grid"}},
      {ExperimentKind::ergodic,
       {"paths", "times", "N", "gamma", "burn_in", "spacing", "n_stationary", "replicates", "phi_c", "alpha_v",
        "rate_delta"}},
      {ExperimentKind::sensitivity, {"paths", "lambdas", "times", "fd_eps", "functional", "direction"}},
      {ExperimentKind::tailcheck, {"paths", "driver", "s", "lambda", "y0", "cap", "A", "V0", "delta", "T", "R"}},
  };
  return keys;
}

EstimatorConfig parse_estimator(const json& j, ExperimentKind kind) {
  EstimatorConfig e;
  ObjectReader r(j, "estimator");
  const auto& allowed = estimator_keys().at(kind);
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key))
      throw ConfigError("unknown key 'estimator." + key + "' for kind '" + kind_name(kind) + "'");
  }
  e.paths = r.count("paths", e.paths);
  e.record_every = r.count("record_every", e.record_every);
  e.mode = r.text("mode", e.mode);
  e.gamma = r.number("gamma", e.gamma);
  e.threshold_mult = r.number("threshold_mult", e.threshold_mult);
  e.h = r.number("h", e.h);
  e.theta = r.number("theta", e.theta);
  e.N = r.number("N", e.N);
  e.eps = r.numbers("eps", e.eps);
  e.delta = r.number("delta", kind == ExperimentKind::tailcheck ? 0.25 : e.delta);
  e.lambda = r.number("lambda", kind == ExperimentKind::tailcheck ? 1.0 : e.lambda);
  e.log_n_min = r.number("log_n_min", e.log_n_min);
  e.log_n_max = r.number("log_n_max", e.log_n_max);
  e.n_grid = r.count("n_grid", e.n_grid);
  e.times = r.numbers("times", e.times);
  e.burn_in = r.number("burn_in", e.burn_in);
  e.spacing = r.number("spacing", e.spacing);
  e.n_stationary = r.count("n_stationary", e.n_stationary);
  e.replicates = r.count("replicates", e.replicates);
  e.phi_c = r.number("phi_c", e.phi_c);
  e.alpha_v = r.number("alpha_v", e.alpha_v);
  e.rate_delta = r.number("rate_delta", e.rate_delta);
  e.lambdas = r.numbers("lambdas", e.lambdas);
  e.fd_eps = r.number("fd_eps", e.fd_eps);
  e.functional = r.text("functional", e.functional);
  if (r.has("direction")) e.direction = parse_segment(r.raw("direction"), "estimator.direction");
  e.driver = r.text("driver", e.driver);
  e.s = r.number("s", e.s);
  e.y0 = r.number("y0", e.y0);
  e.cap = r.number("cap", e.cap);
  e.A = r.number("A", e.A);
  e.V0 = r.number("V0", e.V0);
  e.T = r.number("T", e.T);
  e.R = r.numbers("R", e.R);
  r.finish();

  if (e.paths == 0) throw ConfigError("field 'estimator.paths' must be positive");
  if (e.record_every == 0) throw ConfigError("field 'estimator.record_every' must be positive");
  if (e.mode != "controlled" && e.mode != "synchronous")
    throw ConfigError("field 'estimator.mode' must be 'controlled' or 'synchronous'");
  if (e.functional != "value" && e.functional != "tanh")
    throw ConfigError("field 'estimator.functional' must be 'value' or 'tanh'");
  if (e.driver != "squared-ou" && e.driver != "deterministic")
    throw ConfigError("field 'estimator.driver' must be 'squared-ou' or 'deterministic'");
  return e;
}

void check_on_grid(double time, double dt, const std::string& field) {
  try {
    exact_steps(time, dt, field.c_str());
  } catch (const DomainError& err) {
    throw ConfigError("field '" + field + "': " + err.what());
  }
}

void check_times(const ExperimentConfig& c) {
  const double dt = c.grid.dt;
  const auto& e = c.estimator;
  switch (c.kind) {
    case ExperimentKind::couple:
    case ExperimentKind::support_probe:
      check_on_grid(e.h, dt, "estimator.h");
      break;
    case ExperimentKind::ergodic:
      for (double t : e.times) check_on_grid(t, dt, "estimator.times");
      check_on_grid(e.burn_in, dt, "estimator.burn_in");
      check_on_grid(e.spacing, dt, "estimator.spacing");
      break;
    case ExperimentKind::sensitivity:
      for (double t : e.times) check_on_grid(t, dt, "estimator.times");
      break;
    case ExperimentKind::tailcheck:
      check_on_grid(e.T, dt, "estimator.T");
      break;
    default:
      break;
  }
}

json segment_json(const SegmentSpec& s) {
  if (s.constant) return json{{"constant", *s.constant}};
  return json{{"polynomial", s.polynomial}};
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("config is not valid JSON: ") + err.what());
  }
  ObjectReader r(root, "");
  ExperimentConfig c;
  c.kind = parse_kind(r.text("kind"));

  if (c.kind != ExperimentKind::tailcheck || r.has("model")) {
    ObjectReader m(r.raw("model"), "model");
    c.model_id = m.text("id");
    if (m.has("params")) {
      ObjectReader p(m.raw("params"), "model.params");
      for (const auto& [key, value] : m.raw("params").items()) c.model_params[key] = p.number(key);
      p.finish();
    }
    m.finish();
    try {
      make_model(c.model_id, c.model_params);
    } catch (const UnknownModel& err) {
      throw ConfigError(std::string("field 'model.id': ") + err.what());
    } catch (const DomainError& err) {
      throw ConfigError(std::string("field 'model.params': ") + err.what());
    }
  }

  {
    ObjectReader g(r.raw("grid"), "grid");
    const double dt = g.number("dt");
    const double rr = g.number("r");
    const double horizon = g.number("horizon");
    g.finish();
    try {
      c.grid = TimeGrid::from_times(dt, rr, horizon);
    } catch (const DomainError& err) {
      throw ConfigError(std::string("field 'grid': ") + err.what());
    }
  }

  c.seed = r.u64("seed", c.seed);
  if (r.has("init")) c.init = parse_segment(r.raw("init"), "init");
  if (r.has("init_y")) c.init_y = parse_segment(r.raw("init_y"), "init_y");
  if (r.has("target")) c.target = parse_segment(r.raw("target"), "target");
  c.estimator = parse_estimator(r.has("estimator") ? r.raw("estimator") : json::object(), c.kind);
  c.workers = r.count("workers", c.workers);
  c.output = r.text("output", c.output);
  r.finish();
  check_times(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::uint64_t ExperimentConfig::hash() const {
  const auto& e = estimator;
  json j = {
      {"kind", kind_name(kind)},
      {"model", {{"id", model_id}, {"params", model_params}}},
      {"grid", {{"dt", grid.dt}, {"delay_steps", grid.delay_steps}, {"horizon_steps", grid.horizon_steps}}},
      {"seed", seed},
      {"init", segment_json(init)},
      {"init_y", segment_json(init_y)},
      {"target", segment_json(target)},
      {"estimator",
       {{"paths", e.paths}, {"record_every", e.record_every}, {"mode", e.mode}, {"gamma", e.gamma},
        {"threshold_mult", e.threshold_mult}, {"h", e.h}, {"theta", e.theta}, {"N", e.N}, {"eps", e.eps},
        {"delta", e.delta}, {"lambda", e.lambda}, {"log_n_min", e.log_n_min}, {"log_n_max", e.log_n_max},
        {"n_grid", e.n_grid}, {"times", e.times}, {"burn_in", e.burn_in}, {"spacing", e.spacing},
        {"n_stationary", e.n_stationary}, {"replicates", e.replicates}, {"phi_c", e.phi_c}, {"alpha_v", e.alpha_v},
        {"rate_delta", e.rate_delta}, {"lambdas", e.lambdas}, {"fd_eps", e.fd_eps}, {"functional", e.functional},
        {"direction", segment_json(e.direction)}, {"driver", e.driver}, {"s", e.s}, {"y0", e.y0}, {"cap", e.cap},
        {"A", e.A}, {"V0", e.V0}, {"T", e.T}, {"R", e.R}}},
  };
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace sdde

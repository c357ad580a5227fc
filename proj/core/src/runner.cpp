#include "sdde/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "sdde/approximation.hpp"
#include "sdde/catalog.hpp"
#include "sdde/coupling.hpp"
#include "sdde/diagnostics.hpp"
#include "sdde/ergodicity.hpp"
#include "sdde/integrator.hpp"
#include "sdde/lyapunov.hpp"
#include "sdde/parallel.hpp"
#include "sdde/seed.hpp"
#include "sdde/sensitivity.hpp"
#include "sdde/stats.hpp"
#include "sdde/support.hpp"

#ifndef SDDE_VERSION
#define SDDE_VERSION "0.0.0"
#endif

namespace sdde {

const char* toolkit_version() { return SDDE_VERSION; }

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double as_double(std::size_t v) { return static_cast<double>(v); }

std::vector<CsvTable> run_simulate(const ExperimentConfig& c, std::size_t workers) {
  const SddeModel model = make_model(c.model_id, c.model_params);
  const Segment x0 = c.init.build(c.grid);
  const std::size_t steps = c.grid.horizon_steps;
  const std::size_t every = c.estimator.record_every;
  CsvTable t{"simulate", {"path", "step", "t"}, {}};
  for (std::size_t i = 0; i < model.dim_state; ++i) t.columns.push_back("x" + std::to_string(i));
  const auto per_path = parallel_map(c.estimator.paths, workers, [&](std::size_t p) {
    GaussianNoise noise(derive_seed(c.seed, p, StreamTag::base_noise), c.grid.dt);
    const PathGrid path = em_simulate(model, x0, steps, noise);
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k <= steps; ++k) {
      if (k % every != 0 && k != steps) continue;
      std::vector<double> row{as_double(p), as_double(k), as_double(k) * c.grid.dt};
      for (double v : path.state_at_step(k)) row.push_back(v);
      rows.push_back(std::move(row));
    }
    return rows;
  });
  for (const auto& rows : per_path) t.rows.insert(t.rows.end(), rows.begin(), rows.end());
  return {t};
}

std::vector<CsvTable> run_couple(const ExperimentConfig& c, std::size_t workers) {
  const auto& e = c.estimator;
  const SddeModel model = make_model(c.model_id, c.model_params);
  const Segment x = c.init.build(c.grid);
  const Segment y = c.init_y.build(c.grid);
  const std::size_t steps = c.grid.horizon_steps;
  const std::size_t h_steps = c.grid.steps_for(e.h);
  if (h_steps > steps) throw ConfigError("field 'estimator.h' exceeds the grid horizon");
  const BatchOptions batch{e.paths, c.seed, workers};
  std::vector<CoupledRun> runs;
  if (e.mode == "synchronous") {
    runs = run_synchronous_batch(model, x, y, steps, batch);
  } else {
    runs = run_controlled_batch(model, x, y, ControlSpec{e.gamma, e.threshold_mult, LedgerMode::with_ledger}, steps,
                                batch);
  }
  const MetricSpec metric{e.N, e.gamma};
  CsvTable paths{"couple", {"path", "tau_step", "dist_h", "d_metric_h", "kl", "log_weight", "max_control"}, {}};
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    const SegmentView xh = r.path_x.segment_view(h_steps);
    const SegmentView yh = r.path_y.segment_view(h_steps);
    paths.rows.push_back({as_double(i), r.stopped() ? as_double(r.tau_step) : -1.0, sup_dist(xh, yh),
                          d_metric(xh, yh, metric), r.ledger.kl_half_integral, r.ledger.log_exponent,
                          r.max_control_norm()});
  }
  const auto est = contraction_estimate(runs, e.h, e.theta);
  CsvTable summary{"couple_summary",
                   {"upsilon", "exceed_prob", "mean_ratio", "mean_kl", "tv_bound", "degenerate", "n"},
                   {{sup_dist(x, y), est.exceed_prob, est.mean_ratio, est.mean_kl, est.tv_bound,
                     est.degenerate ? 1.0 : 0.0, as_double(est.n)}}};
  return {paths, summary};
}

std::vector<CsvTable> run_approx(const ExperimentConfig& c, std::size_t workers) {
  const auto& e = c.estimator;
  const SddeModel model = make_model(c.model_id, c.model_params);
  ApproximationConfig ac;
  ac.eps = e.eps;
  ac.gamma = e.gamma;
  ac.steps = c.grid.horizon_steps;
  ac.paths = e.paths;
  ac.seed = c.seed;
  ac.workers = workers;
  ac.probes = constant_probe_cloud(c.grid, model.dim_state);
  const auto rows =
      approximation_study(model, mollified_family(c.model_id, c.model_params), c.init.build(c.grid), ac);
  CsvTable t{"approx-study",
             {"eps", "upsilon", "floored", "gain", "success_freq", "kl_mean", "kl_max", "kl_bound",
              "kl_bound_violations"},
             {}};
  for (const auto& r : rows)
    t.rows.push_back({r.eps, r.upsilon, r.floored ? 1.0 : 0.0, r.gain, r.success_freq, r.kl_mean, r.kl_max,
                      r.kl_bound, as_double(r.kl_bound_violations)});
  return {t};
}

std::vector<CsvTable> run_support(const ExperimentConfig& c, std::size_t workers) {
  const auto& e = c.estimator;
  const SddeModel model = make_model(c.model_id, c.model_params);
  SupportProbeConfig sc;
  sc.h = e.h;
  sc.delta = e.delta;
  sc.lambda = e.lambda;
  sc.paths = e.paths;
  sc.seed = c.seed;
  sc.workers = workers;
  sc.log_n_min = e.log_n_min;
  sc.log_n_max = e.log_n_max;
  sc.n_grid = e.n_grid;
  const auto r = support_probe(model, c.init.build(c.grid), c.target.build(c.grid), sc);
  CsvTable t{"support-probe",
             {"success_prob", "kl_mean", "best_log_n", "lower_bound", "log_lower_bound", "paths"},
             {{r.success_prob, r.kl_mean, r.best_log_n, r.lower_bound, r.log_lower_bound, as_double(r.paths)}}};
  return {t};
}

std::vector<CsvTable> run_ergodic(const ExperimentConfig& c, std::size_t workers) {
  const auto& e = c.estimator;
  const SddeModel model = make_model(c.model_id, c.model_params);
  const Segment x = c.init.build(c.grid);
  const MetricSpec metric{e.N, std::min(e.gamma, 1.0)};
  if (e.replicates == 0) throw ConfigError("field 'estimator.replicates' must be positive");

  // distances[j][k]: replicate j, time k
  std::vector<std::vector<double>> distances(e.replicates);
  std::vector<std::vector<double>> dual(e.replicates);
  std::vector<double> terminal;
  const TestFunctional witness = [&metric](SegmentView s) {
    return std::min(metric.N * std::pow(std::abs(s.now()[0]), metric.gamma), 1.0);
  };
  for (std::size_t j = 0; j < e.replicates; ++j) {
    const auto stationary = stationary_estimate(model, Segment::constant(c.grid, 0.0), e.burn_in, e.spacing,
                                                e.n_stationary, derive_seed(c.seed, j, StreamTag::reference));
    for (double t : e.times) {
      const auto sample = sample_segments_at(model, x, t, e.paths, derive_seed(c.seed, j, StreamTag::auxiliary),
                                             workers);
      distances[j].push_back(empirical_coupling_distance(sample, stationary, metric));
      dual[j].push_back(kr_dual_value(witness, sample, stationary, metric));
      if (j == 0 && t == e.times.back())
        for (const auto& s : sample) terminal.push_back(s.now()[0]);
    }
  }

  CsvTable curve{"ergodic", {"t", "distance", "distance_ci95", "kr_lower", "envelope"}, {}};
  std::vector<double> means, upper;
  for (std::size_t k = 0; k < e.times.size(); ++k) {
    std::vector<double> d, w;
    for (std::size_t j = 0; j < e.replicates; ++j) {
      d.push_back(distances[j][k]);
      w.push_back(dual[j][k]);
    }
    const auto est = mean_estimate(d);
    const double ci = e.replicates > 1 ? student_t975(e.replicates - 1) * est.std_error : 0.0;
    means.push_back(est.mean);
    upper.push_back(est.mean + ci);
    curve.rows.push_back({e.times[k], est.mean, ci, mean_estimate(w).mean, kNaN});
  }

  const PhiFunction phi = PhiFunction::linear(e.phi_c);
  const RateFunctions rates = rate_functions(phi);
  const double V_x = std::exp(e.alpha_v * std::abs(x.now()[0]));
  const EnvelopeFit fit = fit_envelope(e.times, upper, V_x, rates, phi, e.rate_delta);
  for (auto& row : curve.rows) row[4] = rate_bound(row[0], V_x, rates, phi, e.rate_delta, fit.c, fit.C);

  double ks = kNaN, p = kNaN;
  if (c.model_id == "ou-nodelay") {
    const ModelParams& mp = c.model_params;
    const double theta = mp.count("theta") ? mp.at("theta") : 1.0;
    const double sigma = mp.count("sigma") ? mp.at("sigma") : 1.0;
    const double sd = std::abs(sigma) / std::sqrt(2.0 * theta);
    ks = ks_statistic(terminal, [sd](double v) { return normal_cdf(v / sd); });
    p = ks_pvalue(ks, terminal.size());
  }
  CsvTable summary{"ergodic_summary", {"fit_c", "fit_C", "V_x", "ks_statistic", "ks_pvalue"},
                   {{fit.c, fit.C, V_x, ks, p}}};
  return {curve, summary};
}

std::vector<CsvTable> run_sensitivity(const ExperimentConfig& c, std::size_t workers) {
  const auto& e = c.estimator;
  const SddeModel model = make_model(c.model_id, c.model_params);
  const Segment x = c.init.build(c.grid);
  const Segment z = e.direction.build(c.grid);
  Functional f;
  FunctionalGradient grad;
  if (e.functional == "value") {
    f = [](SegmentView s) { return s.now()[0]; };
    grad = [](SegmentView, SegmentView u) { return u.now()[0]; };
  } else {
    f = [](SegmentView s) { return std::tanh(s.now()[0]); };
    grad = [](SegmentView s, SegmentView u) {
      const double ch = std::cosh(s.now()[0]);
      return u.now()[0] / (ch * ch);
    };
  }
  const SensitivityOptions opt{e.paths, c.seed, workers};
  CsvTable t{"sensitivity", {"lambda", "t", "estimate", "std_error", "fd", "fd_std_error", "n_paths"}, {}};
  for (double time : e.times) {
    const auto fd = fd_oracle(model, x, z, f, time, e.fd_eps, opt);
    for (double lambda : e.lambdas) {
      const auto g = estimate_gradient(model, x, z, f, grad, time, lambda, opt);
      t.rows.push_back({lambda, time, g.value, g.std_error, fd.value, fd.std_error, as_double(g.n_paths)});
    }
  }
  return {t};
}

std::vector<CsvTable> run_tailcheck(const ExperimentConfig& c, std::size_t workers) {
  const auto& e = c.estimator;
  TailBoundSpec spec;
  spec.lambda = e.lambda;
  spec.delta = e.delta;
  spec.T = e.T;
  std::unique_ptr<TailDriver> driver;
  if (e.driver == "squared-ou") {
    spec.A = e.s * e.s;
    spec.B = 4.0 * e.s * e.s * e.cap;
    driver = squared_ou_driver(e.s, e.lambda, e.y0, e.cap, e.T, c.grid.dt);
  } else {
    spec.A = e.A;
    spec.B = 1.0;
    driver = deterministic_driver(e.A, e.lambda, e.V0, e.T, c.grid.dt);
  }
  const auto report = lem1_empirical_check(*driver, spec, e.R, e.paths, c.seed, workers);
  CsvTable rows{"tailcheck", {"R", "threshold", "exceed", "frequency"}, {}};
  for (const auto& r : report.rows) rows.rows.push_back({r.R, r.threshold, as_double(r.exceed), r.frequency});
  CsvTable summary{"tailcheck_summary", {"used", "discarded", "fit_valid", "slope", "slope_ci95", "intercept"},
                   {{as_double(report.used), as_double(report.discarded), report.fit_valid ? 1.0 : 0.0,
                     report.fit_valid ? report.slope : kNaN, report.fit_valid ? report.slope_ci95 : kNaN,
                     report.fit_valid ? report.intercept : kNaN}}};
  return {rows, summary};
}

}  // namespace

std::vector<CsvTable> run_experiment(const ExperimentConfig& config, std::size_t workers) {
  workers = std::max<std::size_t>(workers, 1);
  switch (config.kind) {
    case ExperimentKind::simulate: return run_simulate(config, workers);
    case ExperimentKind::couple: return run_couple(config, workers);
    case ExperimentKind::approx_study: return run_approx(config, workers);
    case ExperimentKind::support_probe: return run_support(config, workers);
    case ExperimentKind::ergodic: return run_ergodic(config, workers);
    case ExperimentKind::sensitivity: return run_sensitivity(config, workers);
    case ExperimentKind::tailcheck: return run_tailcheck(config, workers);
  }
  throw DomainError("unhandled experiment kind");
}

CsvMetadata experiment_metadata(const ExperimentConfig& config, const CsvTable& table) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config.hash()));
  CsvMetadata meta{{"config_hash", hash},
                   {"seed", std::to_string(config.seed)},
                   {"version", toolkit_version()},
                   {"kind", kind_name(config.kind)},
                   {"table", table.name}};
  if (!config.model_id.empty()) meta.emplace_back("model", config.model_id);
  return meta;
}

std::vector<std::string> run_and_write(ExperimentConfig config, const RunOverrides& overrides) {
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.out_dir) config.output = *overrides.out_dir;
  if (overrides.workers) config.workers = *overrides.workers;
  const auto tables = run_experiment(config, config.workers);
  const std::filesystem::path dir(config.output);
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  for (const auto& table : tables) {
    const auto path = dir / (table.name + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    write_csv(out, table, experiment_metadata(config, table));
    written.push_back(path.string());
  }
  return written;
}

}  // namespace sdde

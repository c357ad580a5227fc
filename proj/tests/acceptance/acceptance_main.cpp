// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sdde/approximation.hpp"
#include "sdde/catalog.hpp"
#include "sdde/coupling.hpp"
#include "sdde/diagnostics.hpp"
#include "sdde/ergodicity.hpp"
#include "sdde/girsanov.hpp"
#include "sdde/integrator.hpp"
#include "sdde/lyapunov.hpp"
#include "sdde/runner.hpp"
#include "sdde/seed.hpp"
#include "sdde/sensitivity.hpp"
#include "sdde/stats.hpp"
#include "sdde/support.hpp"
#include "sdde/transport.hpp"

using namespace sdde;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome method_of_steps() {
  const auto start = Clock::now();
  const auto grid = TimeGrid::from_times(0.01, 1.0, 3.0);
  const auto model = make_model("linear-delay", {{"kappa0", 0.0}, {"kappa1", 1.0}, {"sigma", 0.0}});
  GaussianNoise noise(1, grid.dt);
  const auto path = em_simulate(model, Segment::constant(grid, 1.0), grid.horizon_steps, noise);
  const oracle::PureDelayPolynomial exact(1.0, 3);
  double err = 0.0;
  for (std::size_t k = 0; k <= grid.horizon_steps; ++k) {
    err = std::max(err, std::abs(path.state_at_step(k)[0] - exact(static_cast<double>(k) * grid.dt)));
  }
  const double secs = seconds_since(start);
  return {err <= 0.05 && secs < 1.0, fmt("max error %.4g, %.3g s", err, secs)};
}

Outcome ledger_exactness() {
  GirsanovLedger unit;
  const double dt = 0.01;
  std::vector<double> eta{1.0}, dW{0.0};
  for (int k = 0; k < 200; ++k) unit.accumulate(eta, dW, dt);
  bool ok = std::abs(unit.kl_half_integral - 1.0) <= 1e-12;
  const double pinsker_unit = pinsker_tv_bound(unit.kl_half_integral);
  const double tv_unit = oracle::gaussian_shift_tv(1.0, 2.0);
  ok = ok && pinsker_unit >= tv_unit;
  double worst_margin = 1e300;
  for (double beta : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    for (double T : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      GirsanovLedger l;
      std::vector<double> e{beta};
      const auto steps = exact_steps(T, dt, "T");
      for (std::size_t k = 0; k < steps; ++k) l.accumulate(e, dW, dt);
      const double margin = pinsker_tv_bound(l.kl_half_integral) - oracle::gaussian_shift_tv(beta, T);
      worst_margin = std::min(worst_margin, margin);
    }
  }
  ok = ok && worst_margin >= 0.0;
  return {ok, fmt("kl %.15g, Pinsker %.4f vs TV %.4f, min grid margin %.3g", unit.kl_half_integral, pinsker_unit,
                  tv_unit, worst_margin)};
}

Outcome martingale_normalization() {
  const auto start = Clock::now();
  const auto grid = TimeGrid::from_times(0.01, 1.0, 2.0);
  const auto x = Segment::constant(grid, 1.0);
  const auto y = Segment::constant(grid, 0.0);
  bool ok = true;
  std::string detail;
  for (const char* id : {"linear-delay", "tanh-smooth"}) {
    const auto model = make_model(id);
    const auto runs = run_controlled_batch(model, x, y, ControlSpec{0.5, 2.0, LedgerMode::with_ledger},
                                           grid.horizon_steps, BatchOptions{10000, 31, 1});
    std::vector<double> w;
    for (const auto& r : runs) w.push_back(importance_weight(r.ledger));
    const auto est = mean_estimate(w);
    const double z = (est.mean - 1.0) / est.std_error;
    ok = ok && std::abs(z) <= 4.0;
    detail += fmt("%s mean %.4f se %.4f; ", id, est.mean, est.std_error);
  }
  const double secs = seconds_since(start);
  ok = ok && secs < 30.0;
  return {ok, detail + fmt("%.3g s", secs)};
}

Outcome controlled_contraction() {
  const auto grid = TimeGrid::from_times(0.01, 1.0, 2.0);
  const double h = 2.0 * grid.r();
  const auto x = Segment::constant(grid, 1e-2);
  const auto y = Segment::constant(grid, 0.0);
  const auto holder = make_model("holder-drift");
  const auto steps = exact_steps(h, grid.dt, "h");
  const auto controlled = run_controlled_batch(holder, x, y, ControlSpec{0.4, 2.0, LedgerMode::without_ledger},
                                               steps, BatchOptions{1000, 41, 1});
  const auto est = contraction_estimate(controlled, h, 0.5);
  const auto expanding = make_model("linear-delay", {{"kappa0", -1.0}, {"kappa1", 0.0}, {"sigma", 0.5}});
  const auto sync = run_synchronous_batch(expanding, x, y, steps, BatchOptions{1000, 41, 1});
  const auto control = contraction_estimate(sync, h, 0.5);
  return {est.exceed_prob <= 0.05 && control.exceed_prob > 0.05,
          fmt("controlled exceedance %.4f, synchronous on expanding model %.4f", est.exceed_prob,
              control.exceed_prob)};
}

Outcome approximation() {
  const auto grid = TimeGrid::from_times(0.01, 1.0, 2.0);
  const auto model = make_model("holder-drift");
  ApproximationConfig cfg;
  cfg.eps = {0.1, 0.03, 0.01};
  cfg.gamma = 0.4;
  cfg.steps = grid.horizon_steps;
  cfg.paths = 1000;
  cfg.seed = 51;
  cfg.probes = constant_probe_cloud(grid, 1);
  const auto rows = approximation_study(model, mollified_family("holder-drift"), Segment::constant(grid, 0.3), cfg);
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].success_freq < rows[i - 1].success_freq) ok = false;
    if (rows[i].kl_bound_violations != 0) ok = false;
    detail += fmt("eps %.2g: success %.3f, kl max %.3g <= %.3g; ", rows[i].eps, rows[i].success_freq, rows[i].kl_max,
                  rows[i].kl_bound);
  }
  return {ok, detail};
}

Outcome support() {
  const auto grid = TimeGrid::from_times(0.01, 1.0, 2.0);
  const auto model = make_model("tanh-smooth");
  const auto x = Segment::constant(grid, 1.0);
  const auto z = Segment::sampled(grid, 1, [](double t, std::span<double> out) { out[0] = 0.5 * std::cos(M_PI * t); });
  SupportProbeConfig cfg;
  cfg.h = 2.0;
  cfg.delta = 0.25;
  cfg.lambda = 50.0;
  cfg.paths = 1000;
  cfg.seed = 61;
  const auto res = support_probe(model, x, z, cfg);
  const bool positive = std::isfinite(res.log_lower_bound);
  return {res.success_prob >= 0.5 && positive,
          fmt("success %.3f, kl %.4g, ln bound %.5g at ln N %.4g", res.success_prob, res.kl_mean, res.log_lower_bound,
              res.best_log_n)};
}

Outcome optimal_transport() {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    std::vector<double> cost(9);
    for (double& c : cost) c = u(rng);
    const double exact = solve_assignment(cost, 3).total_cost / 3.0;
    worst = std::max(worst, std::abs(exact - oracle::brute_force_assignment(cost, 3)));
  }
  const auto grid = TimeGrid::from_times(0.1, 0.5, 0.5);
  const MetricSpec metric{1.0, 1.0};
  const TestFunctional f = [](SegmentView s) { return std::clamp(s.now()[0], 0.0, 1.0); };
  std::normal_distribution<double> g(0.0, 1.0);
  bool dual_ok = true;
  for (int inst = 0; inst < 20; ++inst) {
    std::vector<Segment> a, b;
    for (int i = 0; i < 12; ++i) {
      a.push_back(Segment::sampled(grid, 1, [&](double, std::span<double> o) { o[0] = g(rng); }));
    }
    for (int i = 0; i < 12 + inst % 5; ++i) {
      b.push_back(Segment::sampled(grid, 1, [&](double, std::span<double> o) { o[0] = 0.5 + g(rng); }));
    }
    dual_ok = dual_ok && kr_dual_value(f, a, b, metric) <= empirical_coupling_distance(a, b, metric) + 1e-12;
  }
  return {worst <= 1e-12 && dual_ok, fmt("max |exact - brute force| %.3g, dual <= primal: %s", worst,
                                         dual_ok ? "yes" : "no")};
}

Outcome ergodic_decay() {
  const auto config = parse_config(R"({"kind": "ergodic", "model": {"id": "ou-nodelay"},
      "grid": {"dt": 0.01, "r": 0.2, "horizon": 8.0}, "seed": 81, "init": 4.0,
      "estimator": {"paths": 400, "times": [1, 2, 4, 8], "n_stationary": 400, "burn_in": 5.0, "spacing": 1.0,
                    "replicates": 5, "N": 1.0, "gamma": 1.0, "phi_c": 0.5, "alpha_v": 1.0, "rate_delta": 0.5}})");
  const auto tables = run_experiment(config, 1);
  const auto& curve = tables.at(0);
  const auto& summary = tables.at(1);
  bool monotone = true, dominated = true;
  for (std::size_t k = 0; k < curve.rows.size(); ++k) {
    const auto& row = curve.rows[k];
    dominated = dominated && row[4] >= row[1];
    if (k > 0) {
      const auto& prev = curve.rows[k - 1];
      monotone = monotone && row[1] - prev[1] <= std::hypot(row[2], prev[2]);
    }
  }
  auto col = [&](const char* name) {
    for (std::size_t i = 0; i < summary.columns.size(); ++i)
      if (summary.columns[i] == name) return summary.rows.at(0)[i];
    return std::nan("");
  };
  const double p = col("ks_pvalue");
  std::string detail = "distances";
  for (const auto& row : curve.rows) detail += fmt(" %.4f(+-%.4f)", row[1], row[2]);
  detail += fmt("; KS p %.3f; envelope c %.3g C %.3g", p, col("fit_c"), col("fit_C"));
  return {monotone && dominated && p >= 0.01, detail};
}

Outcome sensitivity_crossval() {
  const auto grid = TimeGrid::from_times(0.01, 1.0, 4.0);
  struct Case {
    const char* name;
    SddeModel model;
  };
  const double kappa = 1.0;
  std::vector<Case> cases{{"linear", make_model("linear-delay", {{"kappa0", kappa}, {"kappa1", 0.0}, {"sigma", 0.5}})},
                          {"tanh-smooth", make_model("tanh-smooth")}};
  const Functional f = [](SegmentView s) { return std::tanh(s.now()[0]); };
  const FunctionalGradient grad = [](SegmentView s, SegmentView u) {
    const double c = std::cosh(s.now()[0]);
    return u.now()[0] / (c * c);
  };
  const Functional id = [](SegmentView s) { return s.now()[0]; };
  const FunctionalGradient grad_id = [](SegmentView, SegmentView u) { return u.now()[0]; };
  const auto x = Segment::constant(grid, 0.5);
  const auto z = Segment::sampled(grid, 1, [](double t, std::span<double> out) { out[0] = 1.0 + 0.5 * t; });
  bool ok = true;
  double worst_secs = 0.0, worst_ratio = 0.0;
  std::string detail;
  for (const auto& c : cases) {
    for (double lambda : {0.0, 1.0, 5.0}) {
      for (double mult : {1.0, 2.0, 4.0}) {
        const double t = mult * grid.r();
        const SensitivityOptions opt{10000, 91, 1};
        const auto start = Clock::now();
        const auto est = estimate_gradient(c.model, x, z, f, grad, t, lambda, opt);
        worst_secs = std::max(worst_secs, seconds_since(start));
        const auto fd = fd_oracle(c.model, x, z, f, t, 1e-5, opt);
        // Deterministic cases have zero standard error; floor it at rounding level.
        const double se = std::hypot(est.std_error, fd.std_error) + 1e-9 * (1.0 + std::abs(fd.value));
        const double ratio = std::abs(est.value - fd.value) / se;
        worst_ratio = std::max(worst_ratio, ratio);
        if (ratio > 3.0) {
          ok = false;
          detail += fmt("[%s lambda %.0f t %.0f: %.5f vs %.5f] ", c.name, lambda, t, est.value, fd.value);
        }
      }
    }
  }
  // lambda = 0 against the exact derivative e^{-kappa t} z(0) of the linear model
  double worst_exact = 0.0;
  for (double mult : {1.0, 2.0, 4.0}) {
    const double t = mult * grid.r();
    const auto est = estimate_gradient(cases[0].model, x, z, id, grad_id, t, 0.0, SensitivityOptions{10000, 92, 1});
    const double exact = std::exp(-kappa * t) * z.now()[0];
    // Euler allowance: |(1 - kappa dt)^n - e^{-kappa t}| <= kappa^2 t dt e^{-kappa t} / 2 (1 + o(1)).
    const double allowance = 1.5 * kappa * kappa * t * grid.dt * std::exp(-kappa * t) * std::abs(z.now()[0]);
    const double dev = std::abs(est.value - exact);
    worst_exact = std::max(worst_exact, dev);
    if (dev > 3.0 * est.std_error + allowance) {
      ok = false;
      detail += fmt("[exact t %.0f: %.6f vs %.6f] ", t, est.value, exact);
    }
  }
  ok = ok && worst_secs < 60.0;
  return {ok, detail + fmt("worst |est - fd| / se %.3g, worst exact deviation %.3g, slowest %.3g s", worst_ratio,
                           worst_exact, worst_secs)};
}

Outcome decay() {
  const auto grid = TimeGrid::from_times(0.005, 0.5, 3.0);
  const std::vector<double> times{1.0, 1.5, 2.0, 2.5, 3.0};
  bool ok = true;
  std::string detail;
  for (auto [kappa, lambda] : {std::pair{1.0, 0.0}, std::pair{1.0, 4.0}, std::pair{2.0, 8.0}}) {
    const auto model = make_model("linear-delay", {{"kappa0", kappa}, {"kappa1", 0.0}, {"sigma", 0.5}});
    const auto runs = sensitivity_batch(model, Segment::constant(grid, 0.5), Segment::constant(grid, 1.0), lambda,
                                        grid.horizon_steps, SensitivityOptions{200, 101, 1});
    const auto fit = decay_diagnostic(runs, times);
    const double target = -2.0 * (kappa + lambda);
    const double rel = std::abs(fit.rate - target) / std::abs(target);
    ok = ok && !fit.degenerate && rel <= 0.10;
    detail += fmt("(%.0f,%.0f): %.4g vs %.4g; ", kappa, lambda, fit.rate, target);
  }
  return {ok, detail};
}

Outcome tail_harness() {
  const std::vector<double> R{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 3.0};
  const auto det = deterministic_driver(1.0, 1.0, 3.0, 2.0, 0.01);
  const TailBoundSpec det_spec{1.0, 1e-12, 1.0, 0.25, 2.0};
  const auto det_report = lem1_empirical_check(*det, det_spec, R, 200, 111);
  std::size_t det_exceed = 0;
  for (const auto& row : det_report.rows) det_exceed += row.exceed;

  const double s = 1.0, cap = 16.0;
  const auto ou = squared_ou_driver(s, 1.0, 0.0, cap, 2.0, 0.01);
  const TailBoundSpec ou_spec{s * s, 4.0 * s * s * cap, 1.0, 0.25, 2.0};
  const std::vector<double> R_ou{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  const auto ou_report = lem1_empirical_check(*ou, ou_spec, R_ou, 20000, 112);
  const bool slope_ok = ou_report.fit_valid && ou_report.slope + ou_report.slope_ci95 < 0.0;
  return {det_exceed == 0 && slope_ok,
          fmt("deterministic exceedances %zu; squared OU slope %.4g +- %.4g over %zu paths", det_exceed,
              ou_report.slope, ou_report.slope_ci95, ou_report.used)};
}

Outcome lyapunov_drift() {
  const auto grid = TimeGrid::from_times(0.01, 1.0, 2.0);
  const auto model = make_model("prop-kappa", {{"kappa", 1.0}});
  LyapunovParams params;
  params.C_V = 2.0;
  params.h = 2.0;
  const auto spec = lyapunov_catalog(1.0, params);
  std::vector<Segment> probes;
  for (double v : {2.0, 4.0, 8.0}) probes.push_back(Segment::constant(grid, v));
  const auto report = lyapunov_drift_check(model, spec, probes, 2000, 121);
  std::string detail;
  for (const auto& p : report.probes) {
    detail += fmt("V %.4g: %.4g + %.3g <= %.4g; ", p.V_x, p.drift_mean, p.ci95, p.rhs);
  }
  return {report.all_pass(), detail};
}

Outcome reproducibility() {
  const char* configs[] = {
      R"({"kind": "simulate", "model": {"id": "tanh-smooth"}, "grid": {"dt": 0.01, "r": 0.5, "horizon": 1.0},
          "seed": 3, "init": 0.5, "estimator": {"paths": 8, "record_every": 5}})",
      R"({"kind": "couple", "model": {"id": "holder-drift"}, "grid": {"dt": 0.01, "r": 0.5, "horizon": 1.0},
          "seed": 3, "init": 0.02, "init_y": 0.0, "estimator": {"paths": 50, "h": 1.0}})",
      R"({"kind": "approx-study", "model": {"id": "holder-drift"}, "grid": {"dt": 0.01, "r": 0.5, "horizon": 1.0},
          "seed": 3, "init": 0.3, "estimator": {"paths": 50, "eps": [0.1, 0.01]}})",
      R"({"kind": "support-probe", "model": {"id": "tanh-smooth"}, "grid": {"dt": 0.01, "r": 0.5, "horizon": 1.0},
          "seed": 3, "init": 1.0, "target": 0.0, "estimator": {"paths": 50, "h": 1.0}})",
      R"({"kind": "ergodic", "model": {"id": "ou-nodelay"}, "grid": {"dt": 0.01, "r": 0.1, "horizon": 1.0},
          "seed": 3, "init": 4.0,
          "estimator": {"paths": 40, "times": [0.5, 1.0], "n_stationary": 40, "burn_in": 2.0, "replicates": 2}})",
      R"({"kind": "sensitivity", "model": {"id": "tanh-smooth"}, "grid": {"dt": 0.01, "r": 0.5, "horizon": 1.0},
          "seed": 3, "init": 0.3, "estimator": {"paths": 100, "times": [0.5, 1.0], "lambdas": [0, 1]}})",
      R"({"kind": "tailcheck", "grid": {"dt": 0.01, "r": 0.5, "horizon": 1.0},
          "seed": 3, "estimator": {"paths": 200, "T": 2.0}})",
  };
  auto bodies = [](const ExperimentConfig& c, std::size_t workers) {
    std::string out;
    for (const auto& t : run_experiment(c, workers)) out += t.name + "\n" + csv_body(t);
    return out;
  };
  std::size_t same = 0, total = 0;
  std::string detail;
  for (const char* text : configs) {
    const auto config = parse_config(text);
    const auto a = bodies(config, 1);
    const bool ok = a == bodies(config, 1) && a == bodies(config, 8);
    same += ok ? 1 : 0;
    ++total;
    if (!ok) detail += std::string(kind_name(config.kind)) + " differs; ";
  }
  return {same == total, detail + fmt("%zu/%zu experiment kinds byte-identical", same, total)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"method-of-steps oracle", method_of_steps},
      {"girsanov ledger exactness", ledger_exactness},
      {"martingale normalization", martingale_normalization},
      {"controlled contraction", controlled_contraction},
      {"approximation study", approximation},
      {"support probe", support},
      {"optimal transport", optimal_transport},
      {"ergodic decay", ergodic_decay},
      {"sensitivity cross-validation", sensitivity_crossval},
      {"decay diagnostic", decay},
      {"tail bound harness", tail_harness},
      {"lyapunov drift", lyapunov_drift},
      {"reproducibility", reproducibility},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdde/catalog.hpp"
#include "sdde/error.hpp"
#include "sdde/grid.hpp"

namespace sdde {

/// A config file violated the schema; the message names the offending field.
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

enum class ExperimentKind { simulate, couple, approx_study, support_probe, ergodic, sensitivity, tailcheck };

const char* kind_name(ExperimentKind kind);

/// Initial segment on [-r, 0]: either constant or sum_i coeff[i] t^i.
struct SegmentSpec {
  std::optional<double> constant;
  std::vector<double> polynomial;

  Segment build(const TimeGrid& grid) const;
};

/// Estimator settings. Each kind accepts only its own subset of keys.
struct EstimatorConfig {
  std::size_t paths = 1000;
  std::size_t record_every = 1;

  std::string mode = "controlled";
  double gamma = 0.4;
  double threshold_mult = 2.0;
  double h = 2.0;
  double theta = 0.5;
  double N = 1.0;

  std::vector<double> eps{0.1, 0.03, 0.01};

  double delta = 0.25;
  double lambda = 50.0;
  double log_n_min = 1e-3;
  double log_n_max = 700.0;
  std::size_t n_grid = 4000;

  std::vector<double> times{1, 2, 4, 8};
  double burn_in = 20.0;
  double spacing = 1.0;
  std::size_t n_stationary = 256;
  std::size_t replicates = 5;
  double phi_c = 1.0;
  double alpha_v = 1.0;
  double rate_delta = 0.5;

  std::vector<double> lambdas{0, 1, 5};
  double fd_eps = 1e-4;
  std::string functional = "value";
  SegmentSpec direction{1.0, {}};

  std::string driver = "squared-ou";
  double s = 1.0;
  double y0 = 0.0;
  double cap = 16.0;
  double A = 1.0;
  double V0 = 0.0;
  double T = 10.0;
  std::vector<double> R{0.25, 0.5, 0.75, 1.0, 1.25};
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::simulate;
  std::string model_id;
  ModelParams model_params;
  TimeGrid grid;
  std::uint64_t seed = 1;
  SegmentSpec init{0.0, {}};
  SegmentSpec init_y{1.0, {}};
  SegmentSpec target{0.0, {}};
  EstimatorConfig estimator;
  std::size_t workers = 1;
  std::string output = "results";

  /// FNV-1a hash of the canonical form of every field that affects results
  /// (workers and output are excluded).
  std::uint64_t hash() const;
};

/// Strict JSON parsing: unknown keys, wrong types and off-grid times raise
/// ConfigError naming the field.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace sdde

#include "sdde/girsanov.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sdde/error.hpp"

namespace sdde {

void GirsanovLedger::accumulate(std::span<const double> eta, std::span<const double> dW, double dt) {
  accumulate_signed(eta, dW, dt, 1.0);
}

void GirsanovLedger::accumulate_signed(std::span<const double> eta, std::span<const double> dW, double dt,
                                       double sign) {
  if (!(dt > 0.0)) throw DomainError("ledger step needs dt > 0");
  if (eta.size() != dW.size()) throw DomainError("ledger: eta and dW dimensions differ");
  double sq = 0.0, lin = 0.0;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    if (!std::isfinite(eta[i])) throw DomainError("ledger: non-finite eta");
    sq += eta[i] * eta[i];
    lin += eta[i] * dW[i];
  }
  kl_half_integral += 0.5 * sq * dt;
  log_exponent += sign * lin - 0.5 * sq * dt;
  t_elapsed += dt;
}

GirsanovLedger accumulate(GirsanovLedger ledger, std::span<const double> eta, std::span<const double> dW,
                          double dt) {
  ledger.accumulate(eta, dW, dt);
  return ledger;
}

double pinsker_tv_bound(double kl) {
  if (!(kl >= 0.0)) throw DomainError("Pinsker bound needs kl >= 0");
  return std::sqrt(0.5 * kl);
}

double diff_lower_bound(double mu_A, double kl, double N) {
  if (!(N > 1.0)) throw DomainError("diff_lower_bound needs N > 1");
  if (!(mu_A >= 0.0 && mu_A <= 1.0)) throw DomainError("diff_lower_bound needs mu_A in [0, 1]");
  if (!(kl >= 0.0)) throw DomainError("diff_lower_bound needs kl >= 0");
  return mu_A / N - (kl + std::numbers::ln2) / (N * std::log(N));
}

double log_diff_lower_bound(double mu_A, double kl, double log_N) {
  if (!(log_N > 0.0)) throw DomainError("log_diff_lower_bound needs ln N > 0");
  const double inner = mu_A - (kl + std::numbers::ln2) / log_N;
  if (!(inner > 0.0)) return -std::numeric_limits<double>::infinity();
  return -log_N + std::log(inner);
}

double importance_weight(const GirsanovLedger& ledger) {
  const double w = std::exp(ledger.log_exponent);
  if (!std::isfinite(w)) {
    throw DomainError("importance weight overflows: log exponent " + std::to_string(ledger.log_exponent));
  }
  return w;
}

}  // namespace sdde

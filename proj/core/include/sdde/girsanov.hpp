#pragma once

#include <span>

namespace sdde {

/// Change-of-measure bookkeeping along one controlled path.
///
/// kl_half_integral is the left-endpoint quadrature of (1/2) int |eta|^2 ds,
/// which bounds the KL divergence between the driving noise laws. log_exponent
/// is int beta . dW - (1/2) int |beta|^2 ds for the density exponent beta.
struct GirsanovLedger {
  double kl_half_integral = 0.0;
  double log_exponent = 0.0;
  double t_elapsed = 0.0;

  /// kl += |eta|^2 dt / 2; log_exponent += eta . dW - |eta|^2 dt / 2.
  void accumulate(std::span<const double> eta, std::span<const double> dW, double dt);
  /// Same update with density exponent beta = sign * eta in the linear term.
  void accumulate_signed(std::span<const double> eta, std::span<const double> dW, double dt, double sign);
};

GirsanovLedger accumulate(GirsanovLedger ledger, std::span<const double> eta, std::span<const double> dW, double dt);

/// sqrt(kl / 2): total-variation bound from the Pinsker inequality.
double pinsker_tv_bound(double kl);

/// mu_A / N - (kl + ln 2) / (N ln N); lower bound on nu(A) given mu(A) and
/// KL(mu || nu). May be negative.
double diff_lower_bound(double mu_A, double kl, double N);

/// Natural log of diff_lower_bound, expressed through ln N so huge N do not
/// overflow. Returns -inf when the bound is not positive.
double log_diff_lower_bound(double mu_A, double kl, double log_N);

/// exp(log_exponent). Throws DomainError on overflow.
double importance_weight(const GirsanovLedger& ledger);

}  // namespace sdde

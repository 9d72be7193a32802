#pragma once

#include "secrelay/analytic.hpp"
#include "secrelay/model.hpp"

namespace secrelay {

struct QuadratureSettings {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;

  void validate() const;
};

/// Conditional CDF of the maximum secrecy ratio over N IID relays, given
/// the direct-link offset u: the N-fold product of the single-relay
/// conditional CDF for u >= 0, and the exponential branch for u < 0. The
/// two branches meet continuously at u = 0.
double cond_cdf_max(double z, double u, const ChannelParams& params);

/// Binomial-expansion form of the u >= 0 branch; algebraically identical to
/// the product form, kept as a conditioning cross-check.
double cond_cdf_max_binomial(double z, double u, const ChannelParams& params);

/// Density of the direct-link difference v = z*gamma_se - gamma_sd: a
/// two-sided exponential with a kink at v = 0.
double pdf_v(double v, double z, double lambda_sd, double lambda_se);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
};

/// Outage probability with direct links obtained by numerically integrating
/// the conditional CDF against the difference density (u = v + e^R - 1),
/// bypassing the closed form entirely. Adaptive Gauss-Kronrod with the
/// domain split at the two integrand kinks (v = 0 and v = 1 - e^R) and
/// analytically bounded exponential tails. Throws QuadratureError if the
/// tolerance cannot be met within max_subdivisions.
QuadratureResult quadrature_outage_with_direct_detailed(
    SecrecyRate rate, const ChannelParams& params,
    const QuadratureSettings& settings = {});

OutageProbability quadrature_outage_with_direct(
    SecrecyRate rate, const ChannelParams& params,
    const QuadratureSettings& settings = {});

}  // namespace secrelay

#pragma once

#include "secrelay/analytic.hpp"
#include "secrelay/model.hpp"

namespace secrelay {

/// Mean-SNR ratios that parameterize the high-SNR limits. Always derived
/// from one ChannelParams so the consistency relations between them hold by
/// construction.
struct SnrRatios {
  double kappa;    // lambda_m / lambda_e
  double kappa_s;  // lambda_sd / lambda_se
  double kappa_d;  // lambda_sd / lambda_e
  double kappa_e;  // lambda_se / lambda_m
  double kappa_m;  // lambda_sd / lambda_m

  static SnrRatios from_params(const ChannelParams& params);
};

/// The fixed-direct-link limit also circulates in two variants, differing in
/// its relay-dominant term:
///
///   LimitConsistent: carries exp(-(e^R-1)/lambda_sd) and divides by
///                    (e^R + N*kappa_d) -- the formal high-SNR limit of the
///                    exact direct-link closed form.
///   AltSecondTerm:   drops the exponential and divides by (e^R + kappa_d).
///
/// LimitConsistent converges to the exact form and reduces to the
/// no-direct-link limit as the ratios vanish; AltSecondTerm leaves a
/// persistent offset and exists only for comparison.
enum class AsymFixedForm { LimitConsistent, AltSecondTerm };

/// High-SNR outage without direct links: (e^R / (e^R + kappa))^N, the limit
/// of the exact product form as lambda_m, lambda_e grow at fixed kappa.
OutageProbability asym_no_direct(SecrecyRate rate, double kappa, int n_relays);

/// High-SNR outage with direct-link means held fixed while the relay-hop
/// means grow at fixed kappa. The ratios are evaluated at the finite
/// reference point the caller supplies.
OutageProbability asym_with_direct_fixed(
    SecrecyRate rate, double lambda_sd, double lambda_se,
    const SnrRatios& ratios, int n_relays,
    AsymFixedForm form = AsymFixedForm::LimitConsistent);

/// High-SNR outage with every mean growing at fixed ratios (direct links
/// tracking the relay hops, kappa_s = lambda_sd/lambda_se fixed).
OutageProbability asym_with_direct_scaling(SecrecyRate rate, double kappa,
                                           double kappa_s, double kappa_d,
                                           double kappa_e, int n_relays);

}  // namespace secrelay

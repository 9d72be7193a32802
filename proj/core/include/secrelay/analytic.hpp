#pragma once

#include "secrelay/model.hpp"

namespace secrelay {

/// Probability value with construction-time range enforcement: raw values
/// outside [-1e-9, 1+1e-9] raise InternalConsistencyError (they indicate a
/// bug, not round-off); values inside are clamped to [0,1].
class OutageProbability {
 public:
  static OutageProbability checked(double raw);

  double value() const noexcept { return value_; }

 private:
  explicit OutageProbability(double v) : value_(v) {}
  double value_;
};

/// The closed form for the direct-link topology admits two circulating
/// variants that differ only in the exponential attached to the
/// relay-dominant term:
///
///   Validated:   exp(-(e^R - 1)/lambda_sd)
///   AltExponent: exp(-(e^R - 1)(1/lambda_sd + N/(e^R lambda_e) - N/lambda_m))
///
/// Validated agrees with the independent quadrature oracle to machine
/// precision and with Monte Carlo simulation; AltExponent disagrees with
/// both by up to ~6e-3 absolute at moderate SNR and is retained only so the
/// discrepancy stays auditable.
enum class DirectLinkForm { Validated, AltExponent };

/// CDF of the per-relay secrecy ratio Z = (1 + gamma_rd)/(1 + gamma_re)
/// without direct links, at threshold z >= 1. Throws std::domain_error for
/// z < 1.
double cdf_zn_no_direct(double z, double lambda_m, double lambda_e);

/// Exact outage probability without direct links: the N-fold product of the
/// single-relay CDF at z = e^R. This is the numerically preferred form.
OutageProbability outage_no_direct(SecrecyRate rate,
                                   const ChannelParams& params);

/// The same quantity via binomial expansion of the product (alternating
/// sum, compensated). Kept as an algebraic cross-check of the product form.
double outage_no_direct_binomial(SecrecyRate rate,
                                 const ChannelParams& params);

/// Correction term of the direct-link closed form: the integral
/// int_{-(e^R-1)}^{0} exp(v (1/lambda_sd - n/lambda_m)) dv in closed form,
/// with the removable singularity at n*lambda_sd = lambda_m evaluated via
/// expm1 so the two sides match to full precision.
double f_correction(int n, SecrecyRate rate, double lambda_sd,
                    double lambda_m);

/// Exact outage probability with direct links.
OutageProbability outage_with_direct(
    SecrecyRate rate, const ChannelParams& params,
    DirectLinkForm form = DirectLinkForm::Validated);

}  // namespace secrelay

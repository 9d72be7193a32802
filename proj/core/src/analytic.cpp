#include "secrelay/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "secrelay/errors.hpp"
#include "secrelay/numerics.hpp"

namespace secrelay {

namespace {

constexpr double kRangeSlack = 1e-9;

// Beyond this exponent the direct expm1 route overflows long before the
// term matters; switch to the regrouped two-exponential evaluation.
constexpr double kRegroupThreshold = 50.0;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::domain_error(std::string(name) + " must be positive");
  }
}

}  // namespace

OutageProbability OutageProbability::checked(double raw) {
  if (!std::isfinite(raw) || raw < -kRangeSlack || raw > 1.0 + kRangeSlack) {
    throw InternalConsistencyError(
        "probability " + std::to_string(raw) +
        " outside [0,1] beyond round-off slack");
  }
  return OutageProbability(std::fmin(1.0, std::fmax(0.0, raw)));
}

double cdf_zn_no_direct(double z, double lambda_m, double lambda_e) {
  require_positive(lambda_m, "lambda_m");
  require_positive(lambda_e, "lambda_e");
  if (!(z >= 1.0)) {
    throw std::domain_error("cdf_zn_no_direct requires z >= 1");
  }
  return 1.0 -
         std::exp(-(z - 1.0) / lambda_m) * lambda_m /
             (z * lambda_e + lambda_m);
}

OutageProbability outage_no_direct(SecrecyRate rate,
                                   const ChannelParams& params) {
  if (params.topology() != Topology::NoDirect) {
    throw std::invalid_argument("outage_no_direct requires NoDirect params");
  }
  const double z = std::exp(rate.nats());
  const double f1 = cdf_zn_no_direct(z, params.lambda_m(), params.lambda_e());
  return OutageProbability::checked(
      std::pow(f1, static_cast<double>(params.n_relays())));
}

double outage_no_direct_binomial(SecrecyRate rate,
                                 const ChannelParams& params) {
  if (params.topology() != Topology::NoDirect) {
    throw std::invalid_argument(
        "outage_no_direct_binomial requires NoDirect params");
  }
  const double z = std::exp(rate.nats());
  const double z1 = std::expm1(rate.nats());
  const double lambda_m = params.lambda_m();
  const double lambda_e = params.lambda_e();
  const int n_relays = params.n_relays();

  const double beta = lambda_m / (z * lambda_e + lambda_m);
  NeumaierSum sum;
  double coeff = 1.0;      // C(N, n)
  double beta_pow = 1.0;   // beta^n
  double sign = 1.0;       // (-1)^n
  for (int n = 0; n <= n_relays; ++n) {
    if (n > 0) {
      coeff *= static_cast<double>(n_relays - n + 1) / static_cast<double>(n);
      beta_pow *= beta;
      sign = -sign;
    }
    sum.add(coeff * sign * beta_pow *
            std::exp(-static_cast<double>(n) * z1 / lambda_m));
  }
  return sum.value();
}

double f_correction(int n, SecrecyRate rate, double lambda_sd,
                    double lambda_m) {
  if (n < 1) {
    throw std::invalid_argument("f_correction requires n >= 1");
  }
  require_positive(lambda_sd, "lambda_sd");
  require_positive(lambda_m, "lambda_m");

  const double z1 = std::expm1(rate.nats());
  const double d = static_cast<double>(n) * lambda_sd - lambda_m;
  if (std::abs(d) <=
      1e-9 * std::fmax(static_cast<double>(n) * lambda_sd, lambda_m)) {
    return z1;
  }
  const double arg = z1 * (static_cast<double>(n) / lambda_m - 1.0 / lambda_sd);
  return lambda_sd * lambda_m * std::expm1(arg) / d;
}

OutageProbability outage_with_direct(SecrecyRate rate,
                                     const ChannelParams& params,
                                     DirectLinkForm form) {
  if (params.topology() != Topology::WithDirect) {
    throw std::invalid_argument(
        "outage_with_direct requires WithDirect params");
  }
  const double z = std::exp(rate.nats());
  const double z1 = std::expm1(rate.nats());
  const double lambda_sd = params.lambda_sd();
  const double lambda_se = params.lambda_se();
  const double lambda_m = params.lambda_m();
  const double lambda_e = params.lambda_e();
  const int n_relays = params.n_relays();
  const double n_d = static_cast<double>(n_relays);

  const double s = z * lambda_se + lambda_sd;
  const double beta = lambda_m / (z * lambda_e + lambda_m);
  const double relay_factor = z * lambda_e / (z * lambda_e + lambda_m);

  const double term1 = 1.0 - lambda_sd / s * std::exp(-z1 / lambda_sd);

  const double harmonic = 1.0 / (1.0 / lambda_sd + n_d / (z * lambda_e));
  double term2;
  if (form == DirectLinkForm::Validated) {
    term2 = std::pow(relay_factor, n_d) * harmonic / s *
            std::exp(-z1 / lambda_sd);
  } else {
    // Alternative exponent grouping. Can reach huge magnitudes for small
    // lambda_m; evaluate the whole term in log space to stay finite.
    const double alt_arg =
        -z1 * (1.0 / lambda_sd + n_d / (z * lambda_e) - n_d / lambda_m);
    const double log_term2 = n_d * std::log(relay_factor) +
                             std::log(harmonic / s) + alt_arg;
    term2 = std::exp(log_term2);
  }

  NeumaierSum sum;
  sum.add(term1);
  sum.add(term2);

  double coeff = 1.0;
  double beta_pow = 1.0;
  double sign = 1.0;
  for (int n = 1; n <= n_relays; ++n) {
    coeff *= static_cast<double>(n_relays - n + 1) / static_cast<double>(n);
    beta_pow *= beta;
    sign = -sign;

    const double nd = static_cast<double>(n);
    const double bracket_se =
        z * lambda_se * lambda_m / (nd * z * lambda_se + lambda_m);
    const double decay = std::exp(-nd * z1 / lambda_m);
    const double arg = z1 * (nd / lambda_m - 1.0 / lambda_sd);

    double inner;
    if (arg <= kRegroupThreshold) {
      inner = decay * (bracket_se + f_correction(n, rate, lambda_sd, lambda_m));
    } else {
      // decay * f regrouped so neither factor overflows: both exponentials
      // lie in (0, 1].
      const double d = nd * lambda_sd - lambda_m;
      const double regrouped = lambda_sd * lambda_m *
                               (std::exp(-z1 / lambda_sd) - decay) / d;
      inner = decay * bracket_se + regrouped;
    }
    sum.add(coeff * sign * beta_pow * inner / s);
  }

  return OutageProbability::checked(sum.value());
}

}  // namespace secrelay

#include "secrelay/asymptotic.hpp"

#include <cmath>
#include <stdexcept>

#include "secrelay/numerics.hpp"

namespace secrelay {

namespace {

void require_positive_ratio(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) +
                                " must be strictly positive and finite");
  }
}

void require_relay_count(int n_relays) {
  if (n_relays < 1 || n_relays > ChannelParams::kMaxRelays) {
    throw std::invalid_argument("n_relays must be in [1, 64]");
  }
}

// Inner correction of the fixed-direct-link limit; algebraically the exact
// f_correction rewritten in kappa_m = lambda_sd/lambda_m, with the same
// removable singularity (now at n*kappa_m = 1) and the same expm1-safe
// evaluation.
double f_correction_ratio(int n, double z1, double lambda_sd,
                          double kappa_m) {
  const double d = static_cast<double>(n) * kappa_m - 1.0;
  if (std::abs(d) <=
      1e-9 * std::fmax(static_cast<double>(n) * kappa_m, 1.0)) {
    return z1;
  }
  return lambda_sd * std::expm1(z1 * d / lambda_sd) / d;
}

}  // namespace

SnrRatios SnrRatios::from_params(const ChannelParams& params) {
  if (params.topology() != Topology::WithDirect) {
    throw std::invalid_argument(
        "SnrRatios require WithDirect params (direct-link means)");
  }
  SnrRatios r;
  r.kappa = params.lambda_m() / params.lambda_e();
  r.kappa_s = params.lambda_sd() / params.lambda_se();
  r.kappa_d = params.lambda_sd() / params.lambda_e();
  r.kappa_e = params.lambda_se() / params.lambda_m();
  r.kappa_m = params.lambda_sd() / params.lambda_m();
  return r;
}

OutageProbability asym_no_direct(SecrecyRate rate, double kappa,
                                 int n_relays) {
  require_positive_ratio(kappa, "kappa");
  require_relay_count(n_relays);
  const double z = std::exp(rate.nats());
  return OutageProbability::checked(
      std::pow(z / (z + kappa), static_cast<double>(n_relays)));
}

OutageProbability asym_with_direct_fixed(SecrecyRate rate, double lambda_sd,
                                         double lambda_se,
                                         const SnrRatios& ratios,
                                         int n_relays, AsymFixedForm form) {
  require_positive_ratio(lambda_sd, "lambda_sd");
  require_positive_ratio(lambda_se, "lambda_se");
  require_positive_ratio(ratios.kappa, "kappa");
  require_positive_ratio(ratios.kappa_d, "kappa_d");
  require_positive_ratio(ratios.kappa_e, "kappa_e");
  require_positive_ratio(ratios.kappa_m, "kappa_m");
  require_relay_count(n_relays);

  const double z = std::exp(rate.nats());
  const double z1 = std::expm1(rate.nats());
  const double n_d = static_cast<double>(n_relays);
  const double s = z * lambda_se + lambda_sd;
  const double relay_pow = std::pow(z / (z + ratios.kappa), n_d);

  const double term1 = 1.0 - lambda_sd / s * std::exp(-z1 / lambda_sd);

  double term2;
  if (form == AsymFixedForm::LimitConsistent) {
    term2 = relay_pow * z * lambda_sd * std::exp(-z1 / lambda_sd) /
            (s * (z + n_d * ratios.kappa_d));
  } else {
    term2 = relay_pow * z * lambda_sd / (s * (z + ratios.kappa_d));
  }

  NeumaierSum sum;
  sum.add(term1);
  sum.add(term2);

  double coeff = 1.0;
  double ratio_pow = 1.0;
  double sign = 1.0;
  const double base = ratios.kappa / (z + ratios.kappa);
  for (int n = 1; n <= n_relays; ++n) {
    coeff *= static_cast<double>(n_relays - n + 1) / static_cast<double>(n);
    ratio_pow *= base;
    sign = -sign;
    const double nd = static_cast<double>(n);
    const double bracket = z * lambda_se / (nd * z * ratios.kappa_e + 1.0) +
                           f_correction_ratio(n, z1, lambda_sd, ratios.kappa_m);
    sum.add(coeff * sign * ratio_pow * bracket / s);
  }

  return OutageProbability::checked(sum.value());
}

OutageProbability asym_with_direct_scaling(SecrecyRate rate, double kappa,
                                           double kappa_s, double kappa_d,
                                           double kappa_e, int n_relays) {
  require_positive_ratio(kappa, "kappa");
  require_positive_ratio(kappa_s, "kappa_s");
  require_positive_ratio(kappa_d, "kappa_d");
  require_positive_ratio(kappa_e, "kappa_e");
  require_relay_count(n_relays);

  const double z = std::exp(rate.nats());
  const double n_d = static_cast<double>(n_relays);
  const double relay_pow = std::pow(z / (z + kappa), n_d);

  NeumaierSum sum;
  sum.add(z / (z + kappa_s));
  sum.add(relay_pow * z * kappa_s / ((z + kappa_s) * (z + n_d * kappa_d)));

  double coeff = 1.0;
  double ratio_pow = 1.0;
  double sign = 1.0;
  const double base = kappa / (z + kappa);
  for (int n = 1; n <= n_relays; ++n) {
    coeff *= static_cast<double>(n_relays - n + 1) / static_cast<double>(n);
    ratio_pow *= base;
    sign = -sign;
    const double nd = static_cast<double>(n);
    sum.add(z * coeff * sign * ratio_pow /
            ((z + kappa_s) * (nd * z * kappa_e + 1.0)));
  }

  return OutageProbability::checked(sum.value());
}

}  // namespace secrelay

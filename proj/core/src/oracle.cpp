#include "secrelay/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "secrelay/errors.hpp"
#include "secrelay/numerics.hpp"

namespace secrelay {

void QuadratureSettings::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw std::invalid_argument("quadrature tolerances must be positive");
  }
  if (max_subdivisions < 10) {
    throw std::invalid_argument("max_subdivisions must be >= 10");
  }
}

double cond_cdf_max(double z, double u, const ChannelParams& params) {
  const double lambda_m = params.lambda_m();
  const double lambda_e = params.lambda_e();
  const double n = static_cast<double>(params.n_relays());
  if (u >= 0.0) {
    const double f1 =
        1.0 - std::exp(-u / lambda_m) * lambda_m / (z * lambda_e + lambda_m);
    return std::pow(f1, n);
  }
  const double ze = z * lambda_e;
  return std::pow(ze / (ze + lambda_m), n) * std::exp(n * u / ze);
}

double cond_cdf_max_binomial(double z, double u, const ChannelParams& params) {
  if (u < 0.0) {
    return cond_cdf_max(z, u, params);
  }
  const double lambda_m = params.lambda_m();
  const double lambda_e = params.lambda_e();
  const int n_relays = params.n_relays();
  const double beta = lambda_m / (z * lambda_e + lambda_m);

  NeumaierSum sum;
  double coeff = 1.0;
  double beta_pow = 1.0;
  double sign = 1.0;
  for (int n = 0; n <= n_relays; ++n) {
    if (n > 0) {
      coeff *= static_cast<double>(n_relays - n + 1) / static_cast<double>(n);
      beta_pow *= beta;
      sign = -sign;
    }
    sum.add(coeff * sign * beta_pow *
            std::exp(-static_cast<double>(n) * u / lambda_m));
  }
  return sum.value();
}

double pdf_v(double v, double z, double lambda_sd, double lambda_se) {
  const double s = z * lambda_se + lambda_sd;
  if (v >= 0.0) {
    return std::exp(-v / (z * lambda_se)) / s;
  }
  return std::exp(v / lambda_sd) / s;
}

namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Interval {
  double a, b, value, error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

template <typename F>
Interval gauss_kronrod_15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  double fv[15];
  fv[7] = f(center);
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    fv[i] = f(center - dx);
    fv[14 - i] = f(center + dx);
  }

  double kronrod = kKronrodWeights[7] * fv[7];
  for (int i = 0; i < 7; ++i) {
    kronrod += kKronrodWeights[i] * (fv[i] + fv[14 - i]);
  }
  kronrod *= half;

  // Gauss points sit at the odd Kronrod nodes.
  double gauss = kGaussWeights[3] * fv[7];
  for (int i = 0; i < 3; ++i) {
    gauss += kGaussWeights[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  }
  gauss *= half;

  return Interval{a, b, kronrod, std::abs(kronrod - gauss)};
}

template <typename F>
QuadratureResult integrate_adaptive(const F& f, std::vector<double> knots,
                                    double tail_bound,
                                    const QuadratureSettings& settings) {
  std::priority_queue<Interval> queue;
  double total = 0.0;
  double error = tail_bound;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (knots[i + 1] <= knots[i]) continue;
    const Interval iv = gauss_kronrod_15(f, knots[i], knots[i + 1]);
    total += iv.value;
    error += iv.error;
    queue.push(iv);
  }

  int subdivisions = 0;
  while (error > std::fmax(settings.abs_tol,
                           settings.rel_tol * std::abs(total))) {
    if (subdivisions >= settings.max_subdivisions || queue.empty()) {
      throw QuadratureError(
          "quadrature did not converge: achieved error estimate " +
              std::to_string(error) + " after " +
              std::to_string(subdivisions) + " subdivisions",
          error);
    }
    const Interval worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Interval left = gauss_kronrod_15(f, worst.a, mid);
    const Interval right = gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++subdivisions;
  }

  return QuadratureResult{total, error, subdivisions};
}

}  // namespace

QuadratureResult quadrature_outage_with_direct_detailed(
    SecrecyRate rate, const ChannelParams& params,
    const QuadratureSettings& settings) {
  settings.validate();
  if (params.topology() != Topology::WithDirect) {
    throw std::invalid_argument(
        "quadrature oracle requires WithDirect params");
  }

  const double z = std::exp(rate.nats());
  const double z1 = std::expm1(rate.nats());
  const double lambda_sd = params.lambda_sd();
  const double lambda_se = params.lambda_se();
  const double s = z * lambda_se + lambda_sd;

  const auto integrand = [&](double v) {
    return cond_cdf_max(z, v + z1, params) * pdf_v(v, z, lambda_sd, lambda_se);
  };

  // The integrand never exceeds pdf_v, whose tails integrate in closed
  // form. Truncate where each tail bound drops below a tenth of the
  // absolute tolerance and carry the bounds in the error estimate.
  const double tail_budget = 0.1 * settings.abs_tol;
  const double t_minus =
      lambda_sd * std::fmax(1.0, std::log(lambda_sd / (s * tail_budget)));
  const double zse = z * lambda_se;
  const double t_plus = zse * std::fmax(1.0, std::log(zse / (s * tail_budget)));
  const double left_tail = lambda_sd / s * std::exp(-t_minus / lambda_sd);
  const double right_tail = zse / s * std::exp(-t_plus / zse);

  // Kinks: density at v = 0, conditional-CDF branch switch at u = 0, i.e.
  // v = -z1. Keep only kinks interior to the truncated window.
  std::vector<double> knots{-t_minus};
  for (const double kink : {-z1, 0.0}) {
    if (kink > -t_minus && kink < t_plus && kink > knots.back()) {
      knots.push_back(kink);
    }
  }
  knots.push_back(t_plus);

  return integrate_adaptive(integrand, std::move(knots),
                            left_tail + right_tail, settings);
}

OutageProbability quadrature_outage_with_direct(
    SecrecyRate rate, const ChannelParams& params,
    const QuadratureSettings& settings) {
  return OutageProbability::checked(
      quadrature_outage_with_direct_detailed(rate, params, settings).value);
}

}  // namespace secrelay

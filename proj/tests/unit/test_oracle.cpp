#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "secrelay/analytic.hpp"
#include "secrelay/errors.hpp"
#include "secrelay/montecarlo.hpp"
#include "secrelay/oracle.hpp"

using namespace secrelay;
using doctest::Approx;

namespace {

double rel_err(double a, double b) {
  const double scale = std::fmax(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

TEST_CASE("quadrature settings are validated") {
  QuadratureSettings ok;
  ok.max_subdivisions = 10;
  CHECK_NOTHROW(ok.validate());

  QuadratureSettings bad = ok;
  bad.max_subdivisions = 9;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.abs_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.rel_tol = -1e-8;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("conditional maximum CDF branches meet continuously at u = 0") {
  const auto params = ChannelParams::with_direct(1.0, 1.0, 5.0, 2.0, 3);
  const double z = std::exp(0.3);

  const double from_product = cond_cdf_max(z, 0.0, params);
  const double from_exponential = cond_cdf_max(z, -1e-300, params);
  CHECK(rel_err(from_product, from_exponential) <= 1e-14);

  // Saturates at 1 for large offsets, decays to 0 for very negative ones.
  CHECK(cond_cdf_max(z, 1e4, params) == Approx(1.0).epsilon(1e-15));
  CHECK(cond_cdf_max(z, -1e4, params) == Approx(0.0).epsilon(1e-15));
}

TEST_CASE("product and binomial conditional CDFs agree") {
  for (const double z : {1.0, std::exp(0.3), std::exp(1.0)}) {
    for (const double lm : {0.5, 5.0}) {
      for (const double le : {0.5, 5.0}) {
        for (const int n : {1, 3, 8}) {
          const auto params = ChannelParams::with_direct(1.0, 1.0, lm, le, n);
          for (const double u : {0.0, 0.5, 3.0, 10.0}) {
            CHECK(rel_err(cond_cdf_max(z, u, params),
                          cond_cdf_max_binomial(z, u, params)) <= 1e-12);
          }
        }
      }
    }
  }
}

TEST_CASE("conditional CDF matches conditional relay simulation") {
  const double z = std::exp(0.3);
  const double u = 1.0;
  const auto params = ChannelParams::with_direct(1.0, 1.0, 5.0, 5.0, 3);
  const double predicted = cond_cdf_max(z, u, params);

  const CounterRng rng(4242);
  const std::uint64_t trials = 1'000'000;
  std::uint64_t all_below = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    bool below = true;
    for (std::uint32_t i = 0; i < 3 && below; ++i) {
      const double grd = sample_exponential(5.0, rng.uniform(t, 2 * i));
      const double gre = sample_exponential(5.0, rng.uniform(t, 2 * i + 1));
      below = grd < z * gre + u;
    }
    if (below) ++all_below;
  }
  const auto [lo, hi] = wilson_interval(all_below, trials, 0.95);
  const double p_hat =
      static_cast<double>(all_below) / static_cast<double>(trials);
  CHECK(std::abs(p_hat - predicted) <= 3.0 * 0.5 * (hi - lo));
}

TEST_CASE("difference density integrates to one and is continuous") {
  const double z = std::exp(0.3);
  const double lambda_sd = 2.0;
  const double lambda_se = 3.0;

  // Continuity at the kink.
  const double at0 = pdf_v(0.0, z, lambda_sd, lambda_se);
  CHECK(at0 == Approx(1.0 / (z * lambda_se + lambda_sd)).epsilon(1e-15));
  CHECK(pdf_v(-1e-300, z, lambda_sd, lambda_se) ==
        Approx(at0).epsilon(1e-15));

  // Test-side trapezoid normalization, independent of the adaptive
  // integrator.
  const double t_left = 50.0 * lambda_sd;
  const double t_right = 50.0 * z * lambda_se;
  const std::size_t steps = 200'000;
  double integral = 0.0;
  for (const auto [a, b] : {std::pair{-t_left, 0.0}, std::pair{0.0, t_right}}) {
    const double h = (b - a) / static_cast<double>(steps);
    double acc = 0.5 * (pdf_v(a, z, lambda_sd, lambda_se) +
                        pdf_v(b, z, lambda_sd, lambda_se));
    for (std::size_t i = 1; i < steps; ++i) {
      acc += pdf_v(a + h * static_cast<double>(i), z, lambda_sd, lambda_se);
    }
    integral += acc * h;
  }
  CHECK(integral == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("difference density matches sampled differences (chi-square)") {
  const double z = std::exp(0.3);
  const double lambda_sd = 2.0;
  const double lambda_se = 1.5;
  const double s = z * lambda_se + lambda_sd;
  const double left_mass = lambda_sd / s;
  const double right_mass = z * lambda_se / s;

  // Eight equal-mass bins per side, edges from the closed-form tails.
  std::vector<double> edges;
  for (int k = 8; k >= 1; --k) {
    edges.push_back(lambda_sd * std::log(static_cast<double>(k) / 8.0));
  }
  for (int k = 7; k >= 1; --k) {
    edges.push_back(-z * lambda_se * std::log(static_cast<double>(k) / 8.0));
  }
  // 16 bins: (-inf, e0], (e0, e1], ..., (e13, inf).
  std::vector<double> expected(16, 0.0);
  for (int b = 0; b < 8; ++b) expected[b] = left_mass / 8.0;
  for (int b = 8; b < 16; ++b) expected[b] = right_mass / 8.0;

  const CounterRng rng(1812);
  const std::uint64_t n = 1'000'000;
  std::vector<std::uint64_t> counts(16, 0);
  for (std::uint64_t t = 0; t < n; ++t) {
    const double gse = sample_exponential(lambda_se, rng.uniform(t, 0));
    const double gsd = sample_exponential(lambda_sd, rng.uniform(t, 1));
    const double v = z * gse - gsd;
    std::size_t bin = 0;
    while (bin < edges.size() && v > edges[bin]) ++bin;
    ++counts[bin];
  }

  double chi2 = 0.0;
  for (std::size_t b = 0; b < 16; ++b) {
    const double want = expected[b] * static_cast<double>(n);
    const double diff = static_cast<double>(counts[b]) - want;
    chi2 += diff * diff / want;
  }
  // 0.99 quantile of chi-square with 15 degrees of freedom.
  CHECK(chi2 < 30.5779141669);
}

TEST_CASE("quadrature agrees with the closed form") {
  const SecrecyRate rate = SecrecyRate::from_nats(0.3);
  for (const double lsd : {db_to_linear(5.0), 10.0}) {
    for (const double lm : {db_to_linear(5.0), db_to_linear(25.0)}) {
      for (const int n : {1, 2, 5}) {
        const auto params = ChannelParams::with_direct(lsd, lsd, lm, lm, n);
        const double closed = outage_with_direct(rate, params).value();
        const double quad =
            quadrature_outage_with_direct(rate, params).value();
        CHECK(rel_err(closed, quad) <= 1e-8);
      }
    }
  }
}

TEST_CASE("quadrature collapses onto the no-direct form") {
  const SecrecyRate rate = SecrecyRate::from_nats(0.3);
  const auto with = ChannelParams::with_direct(1e-6, 1e-6, 10.0, 10.0, 2);
  const auto without = ChannelParams::no_direct(10.0, 10.0, 2);
  CHECK(std::abs(quadrature_outage_with_direct(rate, with).value() -
                 outage_no_direct(rate, without).value()) <= 1e-5);
}

TEST_CASE("triple agreement at the zero-rate symmetric point") {
  const SecrecyRate rate = SecrecyRate::from_nats(0.0);
  const auto params = ChannelParams::with_direct(2.0, 2.0, 2.0, 2.0, 1);
  const double quad = quadrature_outage_with_direct(rate, params).value();
  const double closed = outage_with_direct(rate, params).value();
  CHECK(rel_err(quad, closed) <= 1e-8);

  const McEstimate est =
      estimate_outage(params, rate, McConfig{10'000'000, 33, 8, 0.95});
  CHECK(std::abs(est.p_hat - quad) <= 3.0 * est.half_width());
}

TEST_CASE("error estimate is honest against a double-resolution re-run") {
  const SecrecyRate rate = SecrecyRate::from_nats(0.3);
  for (const double lsd : {1.0, db_to_linear(5.0)}) {
    for (const double lm : {2.0, db_to_linear(15.0)}) {
      const auto params = ChannelParams::with_direct(lsd, lsd, lm, lm, 3);
      const QuadratureResult coarse =
          quadrature_outage_with_direct_detailed(rate, params);
      QuadratureSettings fine;
      fine.abs_tol = 1e-13;
      fine.rel_tol = 1e-11;
      const QuadratureResult refined =
          quadrature_outage_with_direct_detailed(rate, params, fine);
      CHECK(std::abs(coarse.value - refined.value) <=
            10.0 * coarse.error_estimate);
    }
  }
}

TEST_CASE("non-convergence raises with the achieved estimate") {
  const SecrecyRate rate = SecrecyRate::from_nats(0.3);
  const auto params = ChannelParams::with_direct(1.0, 1.0, 2.0, 2.0, 2);
  QuadratureSettings settings;
  settings.abs_tol = 1e-300;
  settings.rel_tol = 1e-300;
  settings.max_subdivisions = 10;
  CHECK_THROWS_AS(
      quadrature_outage_with_direct_detailed(rate, params, settings),
      QuadratureError);
  try {
    quadrature_outage_with_direct_detailed(rate, params, settings);
  } catch (const QuadratureError& e) {
    CHECK(e.achieved_error() > 0.0);
    CHECK(e.achieved_error() < 1e-6);
  }
}

TEST_CASE("quadrature rejects no-direct parameters") {
  const SecrecyRate rate = SecrecyRate::from_nats(0.3);
  CHECK_THROWS_AS(quadrature_outage_with_direct(
                      rate, ChannelParams::no_direct(1.0, 1.0, 1)),
                  std::invalid_argument);
}

#include "secrelay/verify.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "secrelay/analytic.hpp"
#include "secrelay/asymptotic.hpp"
#include "secrelay/montecarlo.hpp"
#include "secrelay/oracle.hpp"
#include "secrelay/rng.hpp"

namespace secrelay {

namespace {

constexpr double kOracleRelTol = 1e-8;
constexpr double kAsymAbsTol = 1e-3;
constexpr double kMcSigmas = 3.0;
constexpr int kMcExcursionsAllowed = 1;

double rel_err(double a, double b) {
  const double scale = std::fmax(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

std::string point_label(double lambda_sd, double lambda_se, double lambda_m,
                        int n, double rate) {
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "lsd=%.4g lse=%.4g lm=le=%.4g N=%d R=%.2g", lambda_sd,
                lambda_se, lambda_m, n, rate);
  return buf;
}

struct Runner {
  const VerifyOptions& options;
  VerifyReport report;
  std::uint64_t point_index = 0;

  McEstimate mc(const ChannelParams& params, SecrecyRate rate) {
    McConfig cfg;
    cfg.trials = options.trials;
    cfg.seed = mix_seed(options.seed, point_index++);
    cfg.shards = static_cast<unsigned>(
        std::min<std::uint64_t>(8, std::max<std::uint64_t>(1, cfg.trials)));
    return estimate_outage(params, rate, cfg);
  }

  void add_pair_check(const std::string& name, double measured, double bound,
                      bool pass, bool is_mc) {
    report.checks.push_back({name, measured, bound, pass, is_mc});
    if (is_mc && !pass) ++report.mc_excursions;
  }

  /// analytic-vs-oracle at the oracle tolerance plus analytic-vs-MC at the
  /// statistical gate; the relative cap (when set) tightens both.
  void triple_point(const ChannelParams& params, SecrecyRate rate,
                    bool mc_allowance) {
    const std::string label =
        point_label(params.lambda_sd(), params.lambda_se(), params.lambda_m(),
                    params.n_relays(), rate.nats());

    const double analytic = outage_with_direct(rate, params).value();
    const double oracle =
        quadrature_outage_with_direct(rate, params).value();
    const double oracle_rel = rel_err(analytic, oracle);
    const double oracle_bound =
        options.max_rel_err ? std::fmin(kOracleRelTol, *options.max_rel_err)
                            : kOracleRelTol;
    add_pair_check("analytic-vs-oracle " + label, oracle_rel, oracle_bound,
                   oracle_rel <= oracle_bound, false);

    const McEstimate est = mc(params, rate);
    mc_check("analytic-vs-mc " + label, analytic, est, mc_allowance);
  }

  void mc_check(const std::string& name, double reference,
                const McEstimate& est, bool allowance_eligible) {
    const double dev = std::abs(est.p_hat - reference);
    const double hw = est.half_width();
    const double sigmas = dev / hw;
    bool pass = sigmas <= kMcSigmas;
    if (options.max_rel_err && rel_err(est.p_hat, reference) > *options.max_rel_err) {
      pass = false;
    }
    add_pair_check(name, sigmas, kMcSigmas, pass, allowance_eligible);
  }

  void add_abs_check(const std::string& name, double gap, double bound) {
    report.checks.push_back({name, gap, bound, gap <= bound, false});
  }
};

void run_acceptance(Runner& r) {
  const double sqrt10 = db_to_linear(5.0);
  const SecrecyRate r03 = SecrecyRate::from_nats(0.3);
  const SecrecyRate r0 = SecrecyRate::from_nats(0.0);

  // Direct-link triple agreement: closed form vs quadrature vs simulation.
  const double direct_pairs[3][2] = {
      {sqrt10, sqrt10}, {sqrt10, 10.0}, {10.0, 10.0}};
  const double relay_means[3] = {db_to_linear(5.0), db_to_linear(15.0),
                                 db_to_linear(25.0)};
  for (const auto& pair : direct_pairs) {
    for (const double lm : relay_means) {
      for (const int n : {1, 3}) {
        r.triple_point(
            ChannelParams::with_direct(pair[0], pair[1], lm, lm, n), r03,
            true);
      }
    }
  }
  r.triple_point(ChannelParams::with_direct(sqrt10, sqrt10, sqrt10, sqrt10, 1),
                 r0, true);
  r.triple_point(
      ChannelParams::with_direct(sqrt10, 10.0, relay_means[1], relay_means[1], 3),
      r0, true);

  // No-direct-link exactness: product vs binomial expansion, plus
  // simulation agreement.
  {
    const double lm_grid[3] = {sqrt10, db_to_linear(15.0), db_to_linear(25.0)};
    const double le_grid[3] = {1.0, sqrt10, 10.0};
    const double rate_grid[3] = {0.0, 0.3, 1.0};
    const int n_cycle[3] = {1, 2, 4};
    int idx = 0;
    for (const double lm : lm_grid) {
      for (const double le : le_grid) {
        for (const double rate_nats : rate_grid) {
          const SecrecyRate rate = SecrecyRate::from_nats(rate_nats);
          double worst = 0.0;
          for (int n = 1; n <= 20; ++n) {
            const auto params = ChannelParams::no_direct(lm, le, n);
            worst = std::fmax(
                worst, rel_err(outage_no_direct(rate, params).value(),
                               outage_no_direct_binomial(rate, params)));
          }
          char buf[96];
          std::snprintf(buf, sizeof(buf),
                        "product-vs-binomial lm=%.4g le=%.4g R=%.2g N<=20",
                        lm, le, rate_nats);
          r.add_abs_check(buf, worst, 1e-12);

          const int n = n_cycle[idx % 3];
          const auto params = ChannelParams::no_direct(lm, le, n);
          const double analytic = outage_no_direct(rate, params).value();
          std::snprintf(buf, sizeof(buf),
                        "analytic-vs-mc no-direct lm=%.4g le=%.4g R=%.2g N=%d",
                        lm, le, rate_nats, n);
          r.mc_check(buf, analytic, r.mc(params, rate), false);
          ++idx;
        }
      }
    }
    // Exchangeability anchor: R=0 with symmetric relay links and N=2.
    const auto params = ChannelParams::no_direct(7.5, 7.5, 2);
    r.add_abs_check("exchangeability R=0 N=2 -> 1/4",
                    std::abs(outage_no_direct(r0, params).value() - 0.25),
                    1e-15);
  }

  // High-SNR limits converge onto the exact forms.
  for (const double kappa : {1.0, 10.0}) {
    for (const int n : {1, 2, 4}) {
      const double lm = 1e6;
      const auto params = ChannelParams::no_direct(lm, lm / kappa, n);
      const double gap = std::abs(asym_no_direct(r03, kappa, n).value() -
                                  outage_no_direct(r03, params).value());
      char buf[96];
      std::snprintf(buf, sizeof(buf),
                    "asym-no-direct kappa=%.3g N=%d lm=60dB", kappa, n);
      r.add_abs_check(buf, gap, kAsymAbsTol);
    }
  }
  for (const int n : {1, 2, 4}) {
    const auto params =
        ChannelParams::with_direct(sqrt10, sqrt10, 1e7, 1e7, n);
    const double gap =
        std::abs(asym_with_direct_fixed(r03, sqrt10, sqrt10,
                                        SnrRatios::from_params(params), n)
                     .value() -
                 outage_with_direct(r03, params).value());
    char buf[96];
    std::snprintf(buf, sizeof(buf), "asym-fixed-direct N=%d lm=le=70dB", n);
    r.add_abs_check(buf, gap, kAsymAbsTol);
  }
  for (const int n : {1, 2, 4}) {
    const auto params = ChannelParams::with_direct(1e6, 1e6, 1e6, 1e6, n);
    const SnrRatios ratios = SnrRatios::from_params(params);
    const double gap =
        std::abs(asym_with_direct_scaling(r03, ratios.kappa, ratios.kappa_s,
                                          ratios.kappa_d, ratios.kappa_e, n)
                     .value() -
                 outage_with_direct(r03, params).value());
    char buf[96];
    std::snprintf(buf, sizeof(buf), "asym-scaling-direct N=%d all=60dB", n);
    r.add_abs_check(buf, gap, kAsymAbsTol);
  }

  // Vanishing direct links collapse onto the no-direct closed form.
  for (const double lm : {sqrt10, db_to_linear(15.0), db_to_linear(25.0)}) {
    for (const int n : {1, 2, 4}) {
      const auto with = ChannelParams::with_direct(1e-4, 1e-4, lm, lm, n);
      const auto without = ChannelParams::no_direct(lm, lm, n);
      const double gap = std::abs(outage_with_direct(r03, with).value() -
                                  outage_no_direct(r03, without).value());
      char buf[96];
      std::snprintf(buf, sizeof(buf),
                    "direct-links-negligible lm=le=%.4g N=%d", lm, n);
      r.add_abs_check(buf, gap, kAsymAbsTol);
    }
  }
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& options) {
  if (options.preset != "acceptance") {
    throw std::invalid_argument("unknown verify preset '" + options.preset +
                                "' (available: acceptance)");
  }
  if (options.trials < 1) {
    throw std::invalid_argument("trials must be >= 1");
  }
  if (options.max_rel_err && !(*options.max_rel_err > 0.0)) {
    throw std::invalid_argument("max-rel-err must be positive");
  }

  Runner runner{options, {}, 0};
  run_acceptance(runner);

  VerifyReport& report = runner.report;
  report.mc_excursions_allowed = kMcExcursionsAllowed;
  bool ok = report.mc_excursions <= report.mc_excursions_allowed;
  for (const auto& c : report.checks) {
    if (!c.pass && !c.is_mc) {
      ok = false;
    }
  }
  report.all_pass = ok;
  return report;
}

void print_report(std::ostream& os, const VerifyReport& report) {
  int passed = 0;
  for (const auto& c : report.checks) {
    char line[192];
    std::snprintf(line, sizeof(line), "%-4s  %-72s  measured=%-11.3g bound=%.3g",
                  c.pass ? "ok" : "FAIL", c.name.c_str(), c.measured, c.bound);
    os << line << '\n';
    if (c.pass) ++passed;
  }
  os << "summary: " << passed << '/' << report.checks.size()
     << " checks passed; mc excursions " << report.mc_excursions
     << " (allowed " << report.mc_excursions_allowed << "); "
     << (report.all_pass ? "PASS" : "FAIL") << '\n';
}

}  // namespace secrelay

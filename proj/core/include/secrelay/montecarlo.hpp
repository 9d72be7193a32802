#pragma once

#include <cstdint>
#include <utility>

#include "secrelay/model.hpp"

namespace secrelay {

/// Monte Carlo run configuration. The estimate is a deterministic function
/// of (seed, trials, params, rate); `shards` only controls how the trial
/// range is partitioned across worker threads and never changes the result.
struct McConfig {
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 0;
  unsigned shards = 1;
  double confidence = 0.95;

  void validate(std::uint64_t total_trials) const;
};

/// Outage frequency with a Wilson score interval at the configured
/// confidence.
struct McEstimate {
  double p_hat = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;  // outage count
  double ci_low = 0.0;
  double ci_high = 0.0;

  double half_width() const noexcept { return 0.5 * (ci_high - ci_low); }
};

/// Wilson score interval for `successes` out of `trials` at the given
/// confidence level. Well-behaved at 0 and trials (never collapses to a
/// zero-width interval the way the Wald interval does).
std::pair<double, double> wilson_interval(std::uint64_t successes,
                                          std::uint64_t trials,
                                          double confidence);

/// Secrecy ratio of relay n for one realization:
/// (1 + gamma_rd[n] + gamma_sd) / (1 + gamma_re[n] + gamma_se).
/// Direct-link SNRs are zero in NoDirect draws, so the same expression
/// serves both topologies.
double secrecy_ratio(const LinkDraw& draw, std::size_t n);

struct RelaySelection {
  std::size_t index;
  double z_max;
};

/// Opportunistic selection: the relay with the largest secrecy ratio.
/// Ties break toward the lowest index (a measure-zero event under
/// continuous fading, fixed for determinism).
RelaySelection select_relay(const LinkDraw& draw);

/// Outage event for one realization: max(ln z_max, 0) <= R, i.e.
/// z_max <= e^R. The boundary is closed.
bool outage_trial(const LinkDraw& draw, SecrecyRate rate);

/// Full estimator: `trials` independent realizations of draw -> select ->
/// outage, aggregated with a Wilson interval.
McEstimate estimate_outage(const ChannelParams& params, SecrecyRate rate,
                           const McConfig& config);

}  // namespace secrelay

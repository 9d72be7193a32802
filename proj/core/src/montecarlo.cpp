#include "secrelay/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "secrelay/numerics.hpp"

namespace secrelay {

void McConfig::validate(std::uint64_t total_trials) const {
  if (total_trials < 1) {
    throw std::invalid_argument("trials must be >= 1");
  }
  if (shards < 1 || shards > total_trials) {
    throw std::invalid_argument("shards must satisfy 1 <= shards <= trials");
  }
  if (!(confidence > 0.0) || !(confidence < 1.0)) {
    throw std::invalid_argument("confidence must lie in (0,1)");
  }
}

std::pair<double, double> wilson_interval(std::uint64_t successes,
                                          std::uint64_t trials,
                                          double confidence) {
  if (trials == 0 || successes > trials) {
    throw std::invalid_argument("wilson_interval requires successes <= trials, trials >= 1");
  }
  const double z = normal_quantile(0.5 * (1.0 + confidence));
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2n = z * z / n;
  const double denom = 1.0 + z2n;
  const double center = (p + 0.5 * z2n) / denom;
  const double half =
      z / denom * std::sqrt(p * (1.0 - p) / n + 0.25 * z2n / n);
  return {std::fmax(0.0, center - half), std::fmin(1.0, center + half)};
}

double secrecy_ratio(const LinkDraw& draw, std::size_t n) {
  return (1.0 + draw.gamma_rd[n] + draw.gamma_sd) /
         (1.0 + draw.gamma_re[n] + draw.gamma_se);
}

RelaySelection select_relay(const LinkDraw& draw) {
  const std::size_t n_relays = draw.gamma_rd.size();
  RelaySelection best{0, secrecy_ratio(draw, 0)};
  for (std::size_t i = 1; i < n_relays; ++i) {
    const double z = secrecy_ratio(draw, i);
    if (z > best.z_max) {
      best = {i, z};
    }
  }
  return best;
}

bool outage_trial(const LinkDraw& draw, SecrecyRate rate) {
  return select_relay(draw).z_max <= std::exp(rate.nats());
}

namespace {

std::uint64_t count_outages(const ChannelParams& params, double threshold,
                            const CounterRng& rng, std::uint64_t first,
                            std::uint64_t last) {
  std::uint64_t outages = 0;
  LinkDraw draw;
  for (std::uint64_t t = first; t < last; ++t) {
    draw_links_into(draw, params, rng, t);
    if (select_relay(draw).z_max <= threshold) {
      ++outages;
    }
  }
  return outages;
}

}  // namespace

McEstimate estimate_outage(const ChannelParams& params, SecrecyRate rate,
                           const McConfig& config) {
  config.validate(config.trials);

  const CounterRng rng(config.seed);
  const double threshold = std::exp(rate.nats());
  const std::uint64_t trials = config.trials;
  const std::uint64_t shards = config.shards;

  // Contiguous shard ranges. Counter-based addressing makes the per-trial
  // outcome independent of this partition, so any shard count reproduces
  // the same total.
  std::vector<std::uint64_t> counts(shards, 0);
  const std::uint64_t base = trials / shards;
  const std::uint64_t rem = trials % shards;
  auto shard_range = [&](std::uint64_t s) {
    const std::uint64_t first = s * base + std::min<std::uint64_t>(s, rem);
    const std::uint64_t len = base + (s < rem ? 1 : 0);
    return std::pair<std::uint64_t, std::uint64_t>{first, first + len};
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (shards == 1 || hw == 1) {
    std::uint64_t total = 0;
    for (std::uint64_t s = 0; s < shards; ++s) {
      const auto [first, last] = shard_range(s);
      total += count_outages(params, threshold, rng, first, last);
    }
    counts[0] = total;
  } else {
    std::vector<std::thread> workers;
    const unsigned n_workers =
        static_cast<unsigned>(std::min<std::uint64_t>(shards, hw));
    std::vector<std::uint64_t> worker_totals(n_workers, 0);
    for (unsigned w = 0; w < n_workers; ++w) {
      workers.emplace_back([&, w]() {
        std::uint64_t local = 0;
        for (std::uint64_t s = w; s < shards; s += n_workers) {
          const auto [first, last] = shard_range(s);
          local += count_outages(params, threshold, rng, first, last);
        }
        worker_totals[w] = local;
      });
    }
    for (auto& t : workers) t.join();
    std::uint64_t total = 0;
    for (const auto c : worker_totals) total += c;
    counts[0] = total;
  }

  McEstimate est;
  est.trials = trials;
  est.successes = counts[0];
  est.p_hat = static_cast<double>(est.successes) / static_cast<double>(trials);
  const auto [lo, hi] =
      wilson_interval(est.successes, trials, config.confidence);
  est.ci_low = lo;
  est.ci_high = hi;
  return est;
}

}  // namespace secrelay

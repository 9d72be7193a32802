#include "secrelay/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace secrelay {

namespace {

void require_positive_finite(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) +
                                " must be strictly positive and finite");
  }
}

// Draw addresses within a trial. Fixed so that relay draws occupy the same
// counters in both topologies.
constexpr std::uint32_t kDrawSd = 0;
constexpr std::uint32_t kDrawSe = 1;
constexpr std::uint32_t kDrawRdBase = 2;

}  // namespace

const char* to_string(Topology t) noexcept {
  return t == Topology::NoDirect ? "no-direct" : "with-direct";
}

double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

double linear_to_db(double x_linear) { return 10.0 * std::log10(x_linear); }

SecrecyRate SecrecyRate::from_nats(double nats) {
  if (!(nats >= 0.0) || !std::isfinite(nats)) {
    throw std::invalid_argument("rate_nats must be finite and >= 0");
  }
  return SecrecyRate(nats);
}

SecrecyRate SecrecyRate::from_bits(double bits) {
  return from_nats(bits * M_LN2);
}

ChannelParams ChannelParams::no_direct(double lambda_m, double lambda_e,
                                       int n_relays) {
  require_positive_finite(lambda_m, "lambda_m");
  require_positive_finite(lambda_e, "lambda_e");
  if (n_relays < 1 || n_relays > kMaxRelays) {
    throw std::invalid_argument("n_relays must be in [1, 64]");
  }
  ChannelParams p;
  p.topology_ = Topology::NoDirect;
  // Sentinels; lambda_sd()/lambda_se() refuse to return them.
  p.lambda_sd_ = std::numeric_limits<double>::quiet_NaN();
  p.lambda_se_ = std::numeric_limits<double>::quiet_NaN();
  p.lambda_m_ = lambda_m;
  p.lambda_e_ = lambda_e;
  p.n_relays_ = n_relays;
  return p;
}

ChannelParams ChannelParams::with_direct(double lambda_sd, double lambda_se,
                                         double lambda_m, double lambda_e,
                                         int n_relays) {
  require_positive_finite(lambda_sd, "lambda_sd");
  require_positive_finite(lambda_se, "lambda_se");
  ChannelParams p = no_direct(lambda_m, lambda_e, n_relays);
  p.topology_ = Topology::WithDirect;
  p.lambda_sd_ = lambda_sd;
  p.lambda_se_ = lambda_se;
  return p;
}

double ChannelParams::lambda_sd() const {
  if (topology_ != Topology::WithDirect) {
    throw std::logic_error("lambda_sd is not defined for NoDirect topology");
  }
  return lambda_sd_;
}

double ChannelParams::lambda_se() const {
  if (topology_ != Topology::WithDirect) {
    throw std::logic_error("lambda_se is not defined for NoDirect topology");
  }
  return lambda_se_;
}

double sample_exponential(double mean, double u) {
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument("exponential mean must be positive");
  }
  if (!(u > 0.0) || !(u < 1.0)) {
    throw std::invalid_argument("uniform variate must lie strictly in (0,1)");
  }
  return -mean * std::log(u);
}

void draw_links_into(LinkDraw& out, const ChannelParams& params,
                     const CounterRng& rng, std::uint64_t trial) {
  const int n = params.n_relays();
  out.gamma_rd.resize(static_cast<std::size_t>(n));
  out.gamma_re.resize(static_cast<std::size_t>(n));

  if (params.topology() == Topology::WithDirect) {
    out.gamma_sd =
        sample_exponential(params.lambda_sd(), rng.uniform(trial, kDrawSd));
    out.gamma_se =
        sample_exponential(params.lambda_se(), rng.uniform(trial, kDrawSe));
  } else {
    out.gamma_sd = 0.0;
    out.gamma_se = 0.0;
  }

  const double lambda_m = params.lambda_m();
  const double lambda_e = params.lambda_e();
  for (int i = 0; i < n; ++i) {
    const std::uint32_t rd = kDrawRdBase + static_cast<std::uint32_t>(i);
    const std::uint32_t re =
        kDrawRdBase + static_cast<std::uint32_t>(n + i);
    out.gamma_rd[static_cast<std::size_t>(i)] =
        sample_exponential(lambda_m, rng.uniform(trial, rd));
    out.gamma_re[static_cast<std::size_t>(i)] =
        sample_exponential(lambda_e, rng.uniform(trial, re));
  }
}

LinkDraw draw_links(const ChannelParams& params, const CounterRng& rng,
                    std::uint64_t trial) {
  LinkDraw d;
  draw_links_into(d, params, rng, trial);
  return d;
}

}  // namespace secrelay

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "secrelay/rng.hpp"

namespace secrelay {

/// Whether the source has direct links to the destination and eavesdropper
/// in addition to the relay hops.
enum class Topology { NoDirect, WithDirect };

const char* to_string(Topology t) noexcept;

/// 10^(x/10); dB-valued inputs are converted once at the boundary, all
/// internal math runs on linear power ratios.
double db_to_linear(double x_db);
double linear_to_db(double x_linear);

/// Target secrecy rate. Stored in nats (natural-log channel capacities);
/// bits convert by ln 2.
class SecrecyRate {
 public:
  static SecrecyRate from_nats(double nats);
  static SecrecyRate from_bits(double bits);

  double nats() const noexcept { return nats_; }

 private:
  explicit SecrecyRate(double nats) : nats_(nats) {}
  double nats_;
};

/// Mean SNRs of every link family plus the relay count. All lambdas are
/// linear-scale means of the exponential fading laws. NoDirect instances
/// hold no usable direct-link means: the direct-link accessors throw.
class ChannelParams {
 public:
  static constexpr int kMaxRelays = 64;

  static ChannelParams no_direct(double lambda_m, double lambda_e,
                                 int n_relays);
  static ChannelParams with_direct(double lambda_sd, double lambda_se,
                                   double lambda_m, double lambda_e,
                                   int n_relays);

  Topology topology() const noexcept { return topology_; }
  int n_relays() const noexcept { return n_relays_; }
  double lambda_m() const noexcept { return lambda_m_; }
  double lambda_e() const noexcept { return lambda_e_; }

  /// Direct-link means; guarded so a NoDirect instance can never leak its
  /// sentinel into a computation.
  double lambda_sd() const;
  double lambda_se() const;

 private:
  ChannelParams() = default;

  Topology topology_ = Topology::NoDirect;
  double lambda_sd_ = 0.0;
  double lambda_se_ = 0.0;
  double lambda_m_ = 0.0;
  double lambda_e_ = 0.0;
  int n_relays_ = 0;
};

/// Instantaneous SNRs of every link for one fading realization.
/// gamma_rd/gamma_re have exactly n_relays entries; in NoDirect topology
/// gamma_sd and gamma_se are zero.
struct LinkDraw {
  double gamma_sd = 0.0;
  double gamma_se = 0.0;
  std::vector<double> gamma_rd;
  std::vector<double> gamma_re;
};

/// Inverse-CDF exponential sampling: -mean * ln(u). Rejects u outside the
/// open interval (0,1), which would map to +/-infinity.
double sample_exponential(double mean, double u);

/// All link SNRs for one trial. The trial index addresses the counter-based
/// stream, so repeated calls for the same (rng, trial) are bit-identical and
/// trials may be evaluated in any order or in parallel.
LinkDraw draw_links(const ChannelParams& params, const CounterRng& rng,
                    std::uint64_t trial);

/// Same, reusing the buffers of an existing LinkDraw (hot path of the
/// Monte Carlo loop).
void draw_links_into(LinkDraw& out, const ChannelParams& params,
                     const CounterRng& rng, std::uint64_t trial);

}  // namespace secrelay

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "secrelay/model.hpp"
#include "secrelay/montecarlo.hpp"
#include "secrelay/oracle.hpp"

namespace secrelay {

enum class Estimator { Analytic, Asymptotic, Mc, Oracle };

Estimator estimator_from_string(const std::string& name);
const char* to_string(Estimator e) noexcept;

/// Inclusive dB grid start..stop with positive step.
struct DbRange {
  double start_db = 0.0;
  double stop_db = 0.0;
  double step_db = 1.0;

  std::vector<double> points() const;
};

/// One sweep: a lambda_m grid crossed with a list of relay counts, at a
/// fixed rate and direct-link configuration, evaluated by the requested
/// estimators. Mirrors the JSON config schema one-to-one.
struct SweepSpec {
  Topology topology = Topology::NoDirect;
  DbRange lambda_m_db;
  std::optional<double> lambda_e_db;  // exactly one of lambda_e_db/kappa_db
  std::optional<double> kappa_db;
  std::optional<double> lambda_sd_db;  // WithDirect only
  std::optional<double> lambda_se_db;
  bool track_direct = false;  // lambda_sd = lambda_se = lambda_m ("track")
  std::vector<int> n_list;
  double rate_nats = 0.3;
  std::vector<Estimator> estimators;
  McConfig mc{100'000, 42, 1, 0.95};
  QuadratureSettings quadrature;
  int jobs = 1;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  /// Channel parameters at one grid point.
  ChannelParams params_at(double lambda_m_db_point, int n) const;
};

struct CurvePoint {
  double lambda_m_db = 0.0;
  int n = 0;
  Topology topology = Topology::NoDirect;
  double rate_nats = 0.0;
  std::optional<double> p_analytic;
  std::optional<double> p_asymptotic;
  std::optional<double> p_mc;
  std::optional<double> mc_ci_low;
  std::optional<double> mc_ci_high;
  std::optional<double> p_oracle;
};

/// Evaluates the whole grid, rows ordered by (n ascending, lambda_m_db
/// ascending). Runs up to spec.jobs points concurrently; ordering and
/// values are independent of the job count. Each point's Monte Carlo seed
/// is derived deterministically from the base seed and the row index.
std::vector<CurvePoint> run_sweep(const SweepSpec& spec);

std::string csv_header();
std::string to_csv_row(const CurvePoint& p);
void write_csv(std::ostream& os, const std::vector<CurvePoint>& points);

/// Parses the JSON config (same field names as SweepSpec). Unknown keys and
/// type mismatches are rejected with the key named in the message.
/// `default_seed` applies when the config carries no mc.seed.
SweepSpec parse_sweep_config(const std::string& json_text,
                             std::uint64_t default_seed = 42);

}  // namespace secrelay

#include "secrelay/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "secrelay/analytic.hpp"
#include "secrelay/asymptotic.hpp"

namespace secrelay {

Estimator estimator_from_string(const std::string& name) {
  if (name == "analytic") return Estimator::Analytic;
  if (name == "asymptotic") return Estimator::Asymptotic;
  if (name == "mc") return Estimator::Mc;
  if (name == "oracle") return Estimator::Oracle;
  throw std::invalid_argument(
      "estimators: unknown estimator '" + name +
      "' (expected analytic, asymptotic, mc, oracle)");
}

const char* to_string(Estimator e) noexcept {
  switch (e) {
    case Estimator::Analytic: return "analytic";
    case Estimator::Asymptotic: return "asymptotic";
    case Estimator::Mc: return "mc";
    case Estimator::Oracle: return "oracle";
  }
  return "?";
}

std::vector<double> DbRange::points() const {
  std::vector<double> pts;
  // Inclusive stop; the epsilon absorbs accumulated binary representation
  // error in start + i*step.
  const double span = (stop_db - start_db) / step_db;
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    pts.push_back(start_db + static_cast<double>(i) * step_db);
  }
  return pts;
}

void SweepSpec::validate() const {
  if (!(lambda_m_db.step_db > 0.0)) {
    throw std::invalid_argument("lambda_m_db.step must be > 0");
  }
  if (!(lambda_m_db.start_db <= lambda_m_db.stop_db)) {
    throw std::invalid_argument("lambda_m_db.start must be <= stop");
  }
  if (lambda_e_db.has_value() == kappa_db.has_value()) {
    throw std::invalid_argument(
        "exactly one of lambda_e_db and kappa_db must be set");
  }
  if (n_list.empty()) {
    throw std::invalid_argument("n_list must be nonempty");
  }
  for (const int n : n_list) {
    if (n < 1 || n > ChannelParams::kMaxRelays) {
      throw std::invalid_argument(
          "n_list: every n_relays value must be in [1, 64]");
    }
  }
  if (!(rate_nats >= 0.0) || !std::isfinite(rate_nats)) {
    throw std::invalid_argument("rate_nats must be finite and >= 0");
  }
  if (estimators.empty()) {
    throw std::invalid_argument("estimators must be nonempty");
  }
  std::set<Estimator> seen(estimators.begin(), estimators.end());
  if (seen.size() != estimators.size()) {
    throw std::invalid_argument("estimators must not repeat");
  }

  if (topology == Topology::NoDirect) {
    if (lambda_sd_db || lambda_se_db || track_direct) {
      throw std::invalid_argument(
          "lambda_sd_db/lambda_se_db are only valid for with-direct topology");
    }
    if (seen.count(Estimator::Oracle)) {
      throw std::invalid_argument(
          "estimators: oracle requires with-direct topology");
    }
  } else {
    const bool fixed = lambda_sd_db.has_value() && lambda_se_db.has_value();
    if (track_direct) {
      if (lambda_sd_db || lambda_se_db) {
        throw std::invalid_argument(
            "lambda_sd_db/lambda_se_db: 'track' excludes fixed dB values");
      }
    } else if (!fixed) {
      throw std::invalid_argument(
          "with-direct topology requires lambda_sd_db and lambda_se_db "
          "(or 'track')");
    }
  }

  mc.validate(mc.trials);
  quadrature.validate();
  if (jobs < 1) {
    throw std::invalid_argument("jobs must be >= 1");
  }
}

ChannelParams SweepSpec::params_at(double lambda_m_db_point, int n) const {
  const double lambda_m = db_to_linear(lambda_m_db_point);
  const double lambda_e = lambda_e_db
                              ? db_to_linear(*lambda_e_db)
                              : lambda_m / db_to_linear(*kappa_db);
  if (topology == Topology::NoDirect) {
    return ChannelParams::no_direct(lambda_m, lambda_e, n);
  }
  const double lambda_sd =
      track_direct ? lambda_m : db_to_linear(*lambda_sd_db);
  const double lambda_se =
      track_direct ? lambda_m : db_to_linear(*lambda_se_db);
  return ChannelParams::with_direct(lambda_sd, lambda_se, lambda_m, lambda_e,
                                    n);
}

namespace {

bool wants(const SweepSpec& spec, Estimator e) {
  for (const auto est : spec.estimators) {
    if (est == e) return true;
  }
  return false;
}

CurvePoint evaluate_point(const SweepSpec& spec, double lambda_m_db_point,
                          int n, std::uint64_t point_index) {
  CurvePoint point;
  point.lambda_m_db = lambda_m_db_point;
  point.n = n;
  point.topology = spec.topology;
  point.rate_nats = spec.rate_nats;

  const ChannelParams params = spec.params_at(lambda_m_db_point, n);
  const SecrecyRate rate = SecrecyRate::from_nats(spec.rate_nats);

  if (wants(spec, Estimator::Analytic)) {
    point.p_analytic = spec.topology == Topology::NoDirect
                           ? outage_no_direct(rate, params).value()
                           : outage_with_direct(rate, params).value();
  }
  if (wants(spec, Estimator::Asymptotic)) {
    const double kappa = params.lambda_m() / params.lambda_e();
    if (spec.topology == Topology::NoDirect) {
      point.p_asymptotic = asym_no_direct(rate, kappa, n).value();
    } else if (spec.track_direct) {
      const SnrRatios r = SnrRatios::from_params(params);
      point.p_asymptotic =
          asym_with_direct_scaling(rate, r.kappa, r.kappa_s, r.kappa_d,
                                   r.kappa_e, n)
              .value();
    } else {
      point.p_asymptotic =
          asym_with_direct_fixed(rate, params.lambda_sd(), params.lambda_se(),
                                 SnrRatios::from_params(params), n)
              .value();
    }
  }
  if (wants(spec, Estimator::Mc)) {
    McConfig cfg = spec.mc;
    cfg.seed = mix_seed(spec.mc.seed, point_index);
    const McEstimate est = estimate_outage(params, rate, cfg);
    point.p_mc = est.p_hat;
    point.mc_ci_low = est.ci_low;
    point.mc_ci_high = est.ci_high;
  }
  if (wants(spec, Estimator::Oracle)) {
    point.p_oracle =
        quadrature_outage_with_direct(rate, params, spec.quadrature).value();
  }
  return point;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string{};
}

}  // namespace

std::vector<CurvePoint> run_sweep(const SweepSpec& spec) {
  spec.validate();

  struct GridPoint {
    double lambda_m_db;
    int n;
  };
  std::vector<GridPoint> grid;
  const auto lambda_points = spec.lambda_m_db.points();
  for (const int n : spec.n_list) {
    for (const double l : lambda_points) {
      grid.push_back({l, n});
    }
  }

  std::vector<CurvePoint> rows(grid.size());
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(
      static_cast<std::size_t>(spec.jobs), grid.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      rows[i] = evaluate_point(spec, grid[i].lambda_m_db, grid[i].n, i);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        try {
          for (std::size_t i = next.fetch_add(1); i < grid.size();
               i = next.fetch_add(1)) {
            rows[i] = evaluate_point(spec, grid[i].lambda_m_db, grid[i].n, i);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return rows;
}

std::string csv_header() {
  return "lambda_m_db,n,topology,rate_nats,p_analytic,p_asymptotic,p_mc,"
         "mc_ci_low,mc_ci_high,p_oracle";
}

std::string to_csv_row(const CurvePoint& p) {
  std::string row = format_number(p.lambda_m_db);
  row += ',';
  row += std::to_string(p.n);
  row += ',';
  row += to_string(p.topology);
  row += ',';
  row += format_number(p.rate_nats);
  for (const auto& field :
       {p.p_analytic, p.p_asymptotic, p.p_mc, p.mc_ci_low, p.mc_ci_high,
        p.p_oracle}) {
    row += ',';
    row += format_optional(field);
  }
  return row;
}

void write_csv(std::ostream& os, const std::vector<CurvePoint>& points) {
  os << csv_header() << '\n';
  for (const auto& p : points) {
    os << to_csv_row(p) << '\n';
  }
}

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& key, const std::string& why) {
  throw std::invalid_argument("config field '" + key + "': " + why);
}

double require_number(const json& j, const std::string& key) {
  if (!j.is_number()) config_error(key, "expected a number");
  return j.get<double>();
}

}  // namespace

SweepSpec parse_sweep_config(const std::string& json_text,
                             std::uint64_t default_seed) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") +
                                e.what());
  }
  if (!root.is_object()) {
    throw std::invalid_argument("config root must be a JSON object");
  }

  static const std::set<std::string> known = {
      "topology",     "lambda_m_db", "lambda_e_db", "kappa_db",
      "lambda_sd_db", "lambda_se_db", "n_list",     "rate_nats",
      "estimators",   "mc"};
  for (const auto& [key, value] : root.items()) {
    if (!known.count(key)) config_error(key, "unknown key");
  }

  SweepSpec spec;
  spec.mc.seed = default_seed;

  if (root.contains("topology")) {
    const auto t = root["topology"];
    if (!t.is_string()) config_error("topology", "expected a string");
    const std::string name = t.get<std::string>();
    if (name == "no-direct") {
      spec.topology = Topology::NoDirect;
    } else if (name == "with-direct") {
      spec.topology = Topology::WithDirect;
    } else {
      config_error("topology", "expected 'no-direct' or 'with-direct'");
    }
  }

  if (!root.contains("lambda_m_db")) {
    config_error("lambda_m_db", "required");
  }
  {
    const auto& r = root["lambda_m_db"];
    if (r.is_number()) {
      spec.lambda_m_db = {r.get<double>(), r.get<double>(), 1.0};
    } else if (r.is_object()) {
      for (const auto& [key, value] : r.items()) {
        if (key != "start" && key != "stop" && key != "step") {
          config_error("lambda_m_db." + key, "unknown key");
        }
      }
      if (!r.contains("start") || !r.contains("stop") || !r.contains("step")) {
        config_error("lambda_m_db", "requires start, stop and step");
      }
      spec.lambda_m_db = {require_number(r["start"], "lambda_m_db.start"),
                          require_number(r["stop"], "lambda_m_db.stop"),
                          require_number(r["step"], "lambda_m_db.step")};
    } else {
      config_error("lambda_m_db", "expected a number or {start,stop,step}");
    }
  }

  if (root.contains("lambda_e_db")) {
    spec.lambda_e_db = require_number(root["lambda_e_db"], "lambda_e_db");
  }
  if (root.contains("kappa_db")) {
    spec.kappa_db = require_number(root["kappa_db"], "kappa_db");
  }

  auto parse_direct = [&](const char* key, std::optional<double>& out) {
    if (!root.contains(key)) return false;
    const auto& v = root[key];
    if (v.is_string()) {
      if (v.get<std::string>() != "track") {
        config_error(key, "expected a dB number or 'track'");
      }
      return true;
    }
    out = require_number(v, key);
    return false;
  };
  std::optional<double> sd, se;
  const bool sd_track = parse_direct("lambda_sd_db", sd);
  const bool se_track = parse_direct("lambda_se_db", se);
  if (sd_track != se_track) {
    config_error("lambda_sd_db", "'track' must be set on both direct links");
  }
  spec.track_direct = sd_track;
  spec.lambda_sd_db = sd;
  spec.lambda_se_db = se;

  if (root.contains("n_list")) {
    const auto& nl = root["n_list"];
    if (!nl.is_array() || nl.empty()) {
      config_error("n_list", "expected a nonempty array of integers");
    }
    spec.n_list.clear();
    for (const auto& v : nl) {
      if (!v.is_number_integer()) config_error("n_list", "expected integers");
      spec.n_list.push_back(v.get<int>());
    }
  }

  if (root.contains("rate_nats")) {
    spec.rate_nats = require_number(root["rate_nats"], "rate_nats");
  }

  if (root.contains("estimators")) {
    const auto& es = root["estimators"];
    if (!es.is_array()) config_error("estimators", "expected an array");
    for (const auto& v : es) {
      if (!v.is_string()) config_error("estimators", "expected strings");
      spec.estimators.push_back(estimator_from_string(v.get<std::string>()));
    }
  }

  if (root.contains("mc")) {
    const auto& mc = root["mc"];
    if (!mc.is_object()) config_error("mc", "expected an object");
    for (const auto& [key, value] : mc.items()) {
      if (key == "trials") {
        spec.mc.trials = value.get<std::uint64_t>();
      } else if (key == "seed") {
        spec.mc.seed = value.get<std::uint64_t>();
      } else if (key == "shards") {
        spec.mc.shards = value.get<unsigned>();
      } else if (key == "confidence") {
        spec.mc.confidence = require_number(value, "mc.confidence");
      } else {
        config_error("mc." + key, "unknown key");
      }
    }
  }

  return spec;
}

}  // namespace secrelay

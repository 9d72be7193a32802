// secrelay: secrecy-outage curves for opportunistic decode-and-forward
// relay selection over Rayleigh fading.
//
//   secrelay point   one parameter point as a CSV row (or --pretty block)
//   secrelay sweep   lambda_m grid x relay counts as CSV (figure recipes)
//   secrelay verify  cross-estimator agreement suite, exit 0 iff all pass
//
// Exit codes: 0 success, 1 verification failure, 2 usage/validation error,
// 3 internal-consistency error.
//
// Seed precedence: --seed flag, then the config file's mc.seed, then the
// SECRELAY_SEED environment variable, then 42.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "secrelay/errors.hpp"
#include "secrelay/model.hpp"
#include "secrelay/sweep.hpp"
#include "secrelay/verify.hpp"

namespace {

constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct CommonFlags {
  std::string topology;
  std::optional<double> lambda_e_db;
  std::optional<double> kappa_db;
  std::string lambda_sd_db;  // dB value or "track"
  std::string lambda_se_db;
  std::optional<double> rate_nats;
  std::optional<double> rate_bits;
  std::string estimators;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--topology", f.topology, "no-direct or with-direct")
      ->check(CLI::IsMember({"no-direct", "with-direct"}));
  auto* le = cmd->add_option("--lambda-e-db", f.lambda_e_db,
                             "eavesdropper-hop mean SNR (dB)");
  cmd->add_option("--kappa-db", f.kappa_db,
                  "lambda_m/lambda_e ratio (dB); alternative to --lambda-e-db")
      ->excludes(le);
  cmd->add_option("--lambda-sd-db", f.lambda_sd_db,
                  "S->D mean SNR (dB) or 'track' (= lambda_m)");
  cmd->add_option("--lambda-se-db", f.lambda_se_db,
                  "S->E mean SNR (dB) or 'track' (= lambda_m)");
  auto* rn = cmd->add_option("--rate-nats", f.rate_nats,
                             "target secrecy rate in nats (default 0.3)");
  cmd->add_option("--rate-bits", f.rate_bits,
                  "target secrecy rate in bits (converted by ln 2)")
      ->excludes(rn);
  cmd->add_option("--estimators", f.estimators,
                  "comma list of analytic,asymptotic,mc,oracle");
  cmd->add_option("--trials", f.trials, "Monte Carlo trials");
  cmd->add_option("--seed", f.seed,
                  "base RNG seed (default from SECRELAY_SEED, else 42)");
}

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("SECRELAY_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(raw, &pos);
    if (pos != std::string(raw).size()) throw std::invalid_argument("");
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw std::invalid_argument(
        "SECRELAY_SEED: expected an unsigned integer, got '" +
        std::string(raw) + "'");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double_field(const std::string& text, const std::string& field) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(field + ": expected a number, got '" + text +
                                "'");
  }
}

// Folds shared flags into the spec; only flags the user actually passed
// override config-file values.
void apply_common_flags(const CLI::App* cmd, const CommonFlags& f,
                        secrelay::SweepSpec& spec) {
  const auto given = [&](const char* name) { return cmd->count(name) > 0; };

  if (given("--topology")) {
    spec.topology = f.topology == "no-direct" ? secrelay::Topology::NoDirect
                                              : secrelay::Topology::WithDirect;
  }
  if (given("--lambda-e-db")) {
    spec.lambda_e_db = f.lambda_e_db;
    spec.kappa_db.reset();
  }
  if (given("--kappa-db")) {
    spec.kappa_db = f.kappa_db;
    spec.lambda_e_db.reset();
  }
  const bool sd_given = given("--lambda-sd-db");
  const bool se_given = given("--lambda-se-db");
  if (sd_given || se_given) {
    const bool sd_track = sd_given && f.lambda_sd_db == "track";
    const bool se_track = se_given && f.lambda_se_db == "track";
    if (sd_track != se_track) {
      throw std::invalid_argument(
          "lambda_sd_db/lambda_se_db: 'track' must be set on both");
    }
    spec.track_direct = sd_track;
    spec.lambda_sd_db.reset();
    spec.lambda_se_db.reset();
    if (!sd_track) {
      if (sd_given) {
        spec.lambda_sd_db = parse_double_field(f.lambda_sd_db, "lambda_sd_db");
      }
      if (se_given) {
        spec.lambda_se_db = parse_double_field(f.lambda_se_db, "lambda_se_db");
      }
    }
  }
  if (given("--rate-nats")) {
    spec.rate_nats = *f.rate_nats;
  } else if (given("--rate-bits")) {
    spec.rate_nats = secrelay::SecrecyRate::from_bits(*f.rate_bits).nats();
  }
  if (given("--estimators")) {
    spec.estimators.clear();
    for (const auto& name : split(f.estimators, ',')) {
      spec.estimators.push_back(secrelay::estimator_from_string(name));
    }
  }
  if (given("--trials")) spec.mc.trials = f.trials;
  if (given("--seed")) spec.mc.seed = f.seed;
}

secrelay::DbRange parse_db_range(const std::string& text) {
  const auto fields = split(text, ':');
  if (fields.size() == 1) {
    const double v = parse_double_field(fields[0], "lambda_m_db");
    return {v, v, 1.0};
  }
  if (fields.size() != 3) {
    throw std::invalid_argument(
        "lambda_m_db: expected <value> or <start:stop:step>");
  }
  return {parse_double_field(fields[0], "lambda_m_db.start"),
          parse_double_field(fields[1], "lambda_m_db.stop"),
          parse_double_field(fields[2], "lambda_m_db.step")};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument("config: cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& out_path,
                  const std::vector<secrelay::CurvePoint>& rows) {
  std::ostringstream body;
  secrelay::write_csv(body, rows);
  if (out_path.empty() || out_path == "stdout" || out_path == "-") {
    std::cout << body.str();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      throw std::invalid_argument("out: cannot open '" + out_path +
                                  "' for writing");
    }
    out << body.str();
  }
}

void print_pretty(const secrelay::CurvePoint& p) {
  const auto line = [](const char* name, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-12s: %.10g\n", name, v);
    std::cout << buf;
  };
  line("lambda_m_db", p.lambda_m_db);
  std::cout << "n           : " << p.n << '\n';
  std::cout << "topology    : " << secrelay::to_string(p.topology) << '\n';
  line("rate_nats", p.rate_nats);
  if (p.p_analytic) line("p_analytic", *p.p_analytic);
  if (p.p_asymptotic) line("p_asymptotic", *p.p_asymptotic);
  if (p.p_mc) line("p_mc", *p.p_mc);
  if (p.mc_ci_low) line("mc_ci_low", *p.mc_ci_low);
  if (p.mc_ci_high) line("mc_ci_high", *p.mc_ci_high);
  if (p.p_oracle) line("p_oracle", *p.p_oracle);
}

int run(int argc, char** argv) {
  CLI::App app{
      "Secrecy outage of opportunistic decode-and-forward relay selection "
      "over Rayleigh fading: closed forms, high-SNR asymptotics, Monte "
      "Carlo simulation and a quadrature cross-check."};
  app.require_subcommand(1);

  auto* point = app.add_subcommand(
      "point", "Evaluate one parameter point; prints a CSV row");
  CommonFlags point_flags;
  double point_lambda_m_db = 0.0;
  int point_n = 1;
  bool pretty = false;
  point->add_option("--lambda-m-db", point_lambda_m_db,
                    "relay-hop mean SNR (dB)")
      ->required();
  point->add_option("--n", point_n, "number of relays (n_relays)");
  point->add_flag("--pretty", pretty, "human-readable block instead of CSV");
  add_common_flags(point, point_flags);

  auto* sweep = app.add_subcommand(
      "sweep", "Evaluate a lambda_m grid x relay counts; emits CSV");
  CommonFlags sweep_flags;
  std::string config_path;
  std::string lambda_m_range;
  std::string n_csv;
  int jobs = 1;
  std::string out_path;
  sweep->add_option("--config", config_path,
                    "JSON sweep config (flags override file values)");
  sweep->add_option("--lambda-m-db", lambda_m_range,
                    "relay-hop mean SNR grid, start:stop:step in dB");
  sweep->add_option("--n", n_csv, "comma list of relay counts");
  sweep->add_option("--jobs", jobs, "max grid points evaluated in parallel");
  sweep->add_option("--out", out_path, "output path or 'stdout'");
  add_common_flags(sweep, sweep_flags);

  auto* verify = app.add_subcommand(
      "verify", "Cross-estimator agreement suite; exit 0 iff all checks pass");
  secrelay::VerifyOptions verify_options;
  std::string verify_preset_flag;
  std::string verify_preset_positional;
  std::optional<double> max_rel_err;
  verify->add_option("--preset", verify_preset_flag,
                     "check-grid preset (default: acceptance)");
  verify->add_option("PRESET", verify_preset_positional, "check-grid preset");
  verify->add_option("--trials", verify_options.trials,
                     "Monte Carlo trials per point (default 1000000)");
  verify->add_option("--seed", verify_options.seed,
                     "base RNG seed (default from SECRELAY_SEED, else 42)");
  verify->add_option(
      "--max-rel-err", max_rel_err,
      "additional relative-error cap applied to every estimator pair");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  const std::uint64_t default_seed = env_seed().value_or(42);

  if (point->parsed()) {
    secrelay::SweepSpec spec;
    spec.mc.seed = default_seed;
    spec.lambda_m_db = {point_lambda_m_db, point_lambda_m_db, 1.0};
    spec.n_list = {point_n};
    apply_common_flags(point, point_flags, spec);
    if (point->count("--estimators") == 0) {
      spec.estimators = {secrelay::Estimator::Analytic};
    }
    const auto rows = secrelay::run_sweep(spec);
    if (pretty) {
      print_pretty(rows.front());
    } else {
      std::cout << secrelay::csv_header() << '\n'
                << secrelay::to_csv_row(rows.front()) << '\n';
    }
    return 0;
  }

  if (sweep->parsed()) {
    secrelay::SweepSpec spec;
    if (!config_path.empty()) {
      spec = secrelay::parse_sweep_config(read_file(config_path),
                                          default_seed);
    } else {
      spec.mc.seed = default_seed;
      spec.estimators = {secrelay::Estimator::Analytic};
    }
    if (sweep->count("--lambda-m-db") > 0) {
      spec.lambda_m_db = parse_db_range(lambda_m_range);
    } else if (config_path.empty()) {
      throw std::invalid_argument(
          "lambda_m_db: required (via --lambda-m-db or --config)");
    }
    if (sweep->count("--n") > 0) {
      spec.n_list.clear();
      for (const auto& item : split(n_csv, ',')) {
        spec.n_list.push_back(
            static_cast<int>(parse_double_field(item, "n_list")));
      }
    }
    if (sweep->count("--jobs") > 0) spec.jobs = jobs;
    apply_common_flags(sweep, sweep_flags, spec);
    const auto rows = secrelay::run_sweep(spec);
    write_output(out_path, rows);
    return 0;
  }

  if (verify->count("--seed") == 0) verify_options.seed = default_seed;
  verify_options.preset = "acceptance";
  if (verify->count("PRESET") > 0) {
    verify_options.preset = verify_preset_positional;
  }
  if (verify->count("--preset") > 0) {
    verify_options.preset = verify_preset_flag;
  }
  verify_options.max_rel_err = max_rel_err;
  const secrelay::VerifyReport report = secrelay::run_verify(verify_options);
  secrelay::print_report(std::cout, report);
  return report.all_pass ? 0 : kExitVerifyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const secrelay::InternalConsistencyError& e) {
    std::cerr << "internal-consistency error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const secrelay::QuadratureError& e) {
    std::cerr << "internal-consistency error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
}

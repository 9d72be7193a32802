#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace secrelay {

struct VerifyOptions {
  std::string preset = "acceptance";
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 42;
  /// Extra relative-error cap applied to every estimator-pair row when set
  /// (including Monte Carlo rows, whose default gate is statistical).
  std::optional<double> max_rel_err;
};

struct VerifyCheck {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
  bool is_mc = false;  // statistical row, subject to the excursion allowance
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  int mc_excursions = 0;
  int mc_excursions_allowed = 0;
  bool all_pass = false;
};

/// Runs the named preset ("acceptance" ships by default). Throws
/// std::invalid_argument for unknown presets.
VerifyReport run_verify(const VerifyOptions& options);

/// Per-check pass/fail table plus a summary line.
void print_report(std::ostream& os, const VerifyReport& report);

}  // namespace secrelay

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bfev/io.hpp"

namespace bfev {

/// Exit codes shared by every subcommand.
enum ExitCode : int { exit_yes = 0, exit_no = 1, exit_inconclusive = 2, exit_input_error = 3 };

struct ReportRow {
  long long n = 0;
  std::string diagnostic;
  double value = 0.0;
};

struct ExperimentReport {
  std::string experiment;
  std::vector<ReportRow> rows;
  Json extra = Json::object();
};

/// Runs a named experiment (compound-poisson, doa-copula, max-stable, doa)
/// from a parameter object; unknown keys are rejected.
ExperimentReport run_experiment(const std::string& name, const Json& params);

/// CSV `n,diagnostic,value`, rows in run order.
std::string report_csv(const ExperimentReport& r);
/// Per diagnostic: final value, whether the whole series is nonincreasing and
/// the first n of its final nonincreasing run (1e-12 roundoff slack).
Json report_summary(const ExperimentReport& r);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bfev

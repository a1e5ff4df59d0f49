#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace curvq::cli {

/// Typed, resolved options of one invocation (unset fields take subcommand defaults).
struct Settings {
  std::string surface = "gaussian";
  double a0 = 1.0;
  double sigma0 = 1.0;
  std::optional<std::string> profile_csv;
  int mq = 0;
  std::optional<std::pair<int, int>> mq_range;
  std::optional<double> rho_max;
  std::optional<std::size_t> nodes;
  std::optional<std::size_t> states;
  double kprime = 5.0;
  bool ansatz = false;
  std::string potential = "harmonic";
  double omega = 0.5;
  std::optional<std::string> potential_csv;
  std::optional<double> rho_ref;
  std::optional<std::string> out;
  std::string format = "csv";
  bool second_strip = false;
  bool fixed_domain = false;
};

struct CommandInvocation {
  std::string subcommand;
  std::map<std::string, std::string> options;  ///< flags as given on the command line
  std::optional<std::string> output_path;
  Settings settings;
};

enum class Status { ok, no_result, error };

struct RunSummary {
  std::string subcommand;
  Status status = Status::ok;
  std::string message;
  std::map<std::string, std::string> inputs;
  std::vector<std::string> outputs;
  std::map<std::string, double> metrics;
  std::string json_extra;  ///< serialized object merged into the summary (strip bounds)
};

/// Exit code when parsing stops: 0 after --help, 2 on a usage error.
struct ParseOutcome {
  std::optional<CommandInvocation> invocation;
  int exit_code = 0;
};

/// args excludes the program name. Usage errors are reported on `err`.
ParseOutcome parse(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

RunSummary run(const CommandInvocation& invocation);

std::string to_json(const RunSummary& summary);

/// 0 ok, 1 no_result, 3 numerical failure.
int exit_code(const RunSummary& summary);

/// Parse, run and print the summary JSON on `out`; returns the process exit code.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace curvq::cli

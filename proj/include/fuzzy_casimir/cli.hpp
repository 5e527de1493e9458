#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fuzzy_casimir/casimir.hpp"
#include "fuzzy_casimir/luscher_fit.hpp"
#include "fuzzy_casimir/output.hpp"

namespace fuzzy_casimir::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

enum class Subcommand { Verify, Dispersion, Casimir, Expand, Fit };

struct Range {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;
};

struct RunConfig {
  Subcommand subcommand = Subcommand::Verify;
  double lambda = 1.0;
  std::optional<double> L;       ///< single length (casimir, expand)
  std::optional<Range> L_range;  ///< casimir, fit
  std::optional<Range> q_range;  ///< dispersion
  int n_max = 8;
  int q_count = 50;  ///< plane waves sampled by verify
  OutputFormat format = OutputFormat::Csv;
  std::optional<std::string> output_path;
  std::uint64_t seed = 20170101;
  bool per_polarization = false;
  casimir::ModePolicy mode_policy = casimir::ModePolicy::Floor;
  casimir::Summation summation = casimir::Summation::Compensated;
  std::optional<std::string> input_path;  ///< fit: CSV or JSON samples
  bool include_delta = true;
  double noise_sigma = 0.0;
  std::optional<std::string> dump_ops_path;  ///< verify: operator matrices as JSON

  /// Throws ConfigError when the configuration cannot be run.
  void validate() const;
};

Report cmd_verify(const RunConfig& cfg);
Report cmd_dispersion(const RunConfig& cfg);
Report cmd_casimir(const RunConfig& cfg);
Report cmd_expand(const RunConfig& cfg);
Report cmd_fit(const RunConfig& cfg);

/// Parses fit samples from CSV (columns L and E or E_closed, optional weight)
/// or from the JSON written by the casimir subcommand.
std::vector<luscher::CurveSample> read_samples(const std::string& path);

/// Full CLI: parse, run, write. Returns 0 when every check passes, 1 when a
/// numerical check fails, 2 on usage or configuration errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fuzzy_casimir::cli

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace curvfam::cli {

enum ExitCode : int { kPass = 0, kCheckFailure = 1, kUsageError = 2 };

/// A requested check failed before any output was produced (exit 1).
class CheckFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable input file (exit 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a subcommand reads. Unset optionals take per-command defaults.
struct RunConfig {
  std::string command;
  std::string input;  // pair, polyline or curvature file
  std::string out;

  std::size_t grid = 4096;
  std::optional<double> lambda_min, lambda_max, lambda_step;
  int max_moment = 12;
  std::optional<double> tol;
  double moment_tol = 1e-8;
  double level_tol = 1e-6;
  double boundary_tol = 1e-5;
  int boundary_order = 3;

  std::uint64_t seed = 7;
  int degree = 3;
  int gap_modulus = 4;
  std::optional<int> harmonic;
  std::string generator = "identity";
  std::string curve;  // "circle", a coefficient table file, or empty for a random curve

  std::size_t subset_cap = 22;
  std::string no_balanced;  // "3" or "n=3"
  bool even_tail = false;
  bool curvature_input = false;
  std::string family;  // "", "auto" or a comma-separated index list
  double amplitude = 1.0;

  bool force = false;
  int columns = 0;  // 0: one SVG per lambda
  double stroke_width = 1.5;
};

/// Each returns an ExitCode. Library exceptions propagate to the caller.
int cmd_construct(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_scan(const RunConfig& cfg, std::ostream& out);
int cmd_discrete(const RunConfig& cfg, std::ostream& out);
int cmd_render(const RunConfig& cfg, std::ostream& out);

/// Parses argv, dispatches, maps exceptions to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace curvfam::cli

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace latentsplit::cli {

/// start:stop:step; stop is included when it lies on the grid (up to round-off).
struct Grid {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  std::vector<double> points() const;
};

/// "lo:hi" with lo <= hi. Throws ParseError / ParamOutOfRange.
std::pair<double, double> parse_range(const std::string& text);

/// Throws ParseError for malformed text and ParamOutOfRange for an empty grid or step <= 0.
Grid parse_grid(const std::string& text);

struct RunConfig {
  std::string command;
  std::string u_grid = "0.05:0.95:0.05";
  std::string eps_grid = "0:0.5:0.01";
  std::string v_range = "0.9:1";
  double u = 0.85;
  double visibility = 1.0;
  double tol_lp = 1e-9;
  double tol_bisect = 1e-4;
  unsigned jobs = 1;
  std::uint64_t seed = 7;
  std::string out = "-";
  std::string format = "csv";
  std::size_t sanity = 0;
  std::string preset = "rgb4-fig5";
  bool obs_only = false;
  bool no_symmetry = false;
  bool shared_hat_latent = false;
  std::string scenario = "all";
  std::string strategy;  ///< JSON strategy file for do-demo

  /// Throws ParamOutOfRange / ParseError on inconsistent settings.
  void validate() const;
};

/// Exit statuses shared by all commands.
enum ExitCode : int { kClean = 0, kUsage = 1, kAmbiguous = 2 };

}  // namespace latentsplit::cli

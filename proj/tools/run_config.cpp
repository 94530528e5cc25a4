#include "run_config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "latentsplit/error.hpp"

namespace latentsplit::cli {

std::vector<double> Grid::points() const {
  std::vector<double> out;
  const double span = (stop - start) / step;
  const auto n = static_cast<long>(std::floor(span + 1e-9));
  for (long i = 0; i <= n; ++i) {
    double x = start + static_cast<double>(i) * step;
    // Keep printed grid values clean, e.g. 0.30000000000000004 -> 0.3.
    x = std::round(x * 1e12) / 1e12;
    out.push_back(x);
  }
  return out;
}

namespace {

std::vector<double> split_numbers(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "'" + text + "': bad number '" + item + "'");
    }
  }
  return parts;
}

}  // namespace

std::pair<double, double> parse_range(const std::string& text) {
  const auto parts = split_numbers(text);
  if (parts.size() != 2) throw Error(ErrorKind::ParseError, "range '" + text + "': expected lo:hi");
  if (parts[1] < parts[0]) throw Error(ErrorKind::ParamOutOfRange, "range '" + text + "': lo exceeds hi");
  return {parts[0], parts[1]};
}

Grid parse_grid(const std::string& text) {
  const auto parts = split_numbers(text);
  Grid g;
  if (parts.size() == 1) {
    g = {parts[0], parts[0], 1.0};
  } else if (parts.size() == 3) {
    g = {parts[0], parts[1], parts[2]};
  } else {
    throw Error(ErrorKind::ParseError, "grid '" + text + "': expected start:stop:step or a single value");
  }
  if (!(g.step > 0.0)) throw Error(ErrorKind::ParamOutOfRange, "grid '" + text + "': step must be positive");
  if (g.stop < g.start) throw Error(ErrorKind::ParamOutOfRange, "grid '" + text + "': empty");
  return g;
}

void RunConfig::validate() const {
  static const std::vector<std::string> commands{"rgb4-scan", "rgb4-noise", "fritz-scan", "do-demo"};
  if (std::find(commands.begin(), commands.end(), command) == commands.end()) {
    throw Error(ErrorKind::ParseError, "unknown command '" + command + "'");
  }
  if (format != "csv" && format != "json") throw Error(ErrorKind::ParseError, "format must be csv or json");
  if (!(tol_lp > 0.0) || !(tol_bisect > 0.0)) throw Error(ErrorKind::ParamOutOfRange, "tolerances must be positive");
  if (jobs == 0) throw Error(ErrorKind::ParamOutOfRange, "jobs must be at least 1");
  if (!(visibility >= 0.0 && visibility <= 1.0)) throw Error(ErrorKind::ParamOutOfRange, "visibility must lie in [0,1]");
  parse_grid(u_grid);
  parse_grid(eps_grid);
  parse_range(v_range);
}

}  // namespace latentsplit::cli

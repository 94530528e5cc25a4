#include <doctest.h>

#include <sstream>

#include "../../tools/commands.hpp"
#include "latentsplit/error.hpp"

using namespace latentsplit;
using namespace latentsplit::cli;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::ParseError;
}

std::string run(const RunConfig& cfg, int expected = kClean) {
  std::ostringstream out, log;
  CHECK(run_command(cfg, out, log) == expected);
  return out.str();
}

}  // namespace

TEST_CASE("grids include their end point") {
  const auto g = parse_grid("0.02:0.98:0.02").points();
  CHECK(g.size() == 49);
  CHECK(g.front() == 0.02);
  CHECK(g.back() == 0.98);
  CHECK(g[14] == 0.3);
  CHECK(parse_grid("0.5").points() == std::vector<double>{0.5});
  CHECK(parse_grid("0:1:0.3").points().back() == 0.9);
  CHECK(kind_of([] { (void)parse_grid("0:1"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { (void)parse_grid("0:x:1"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { (void)parse_grid("0:1:0"); }) == ErrorKind::ParamOutOfRange);
  CHECK(kind_of([] { (void)parse_grid("1:0:0.1"); }) == ErrorKind::ParamOutOfRange);
  CHECK(parse_range("0.9:1") == std::pair{0.9, 1.0});
  CHECK(kind_of([] { (void)parse_range("1:0.9"); }) == ErrorKind::ParamOutOfRange);
}

TEST_CASE("configuration is validated") {
  RunConfig cfg;
  CHECK(kind_of([&] { cfg.validate(); }) == ErrorKind::ParseError);
  cfg.command = "fritz-scan";
  CHECK_NOTHROW(cfg.validate());
  cfg.format = "xml";
  CHECK(kind_of([&] { cfg.validate(); }) == ErrorKind::ParseError);
  cfg.format = "csv";
  cfg.jobs = 0;
  CHECK(kind_of([&] { cfg.validate(); }) == ErrorKind::ParamOutOfRange);
}

TEST_CASE("fritz-scan output is deterministic and independent of the job count") {
  RunConfig cfg;
  cfg.command = "fritz-scan";
  cfg.eps_grid = "0:0.5:0.05";
  cfg.sanity = 500;
  const auto one = run(cfg);
  CHECK(one == run(cfg));
  cfg.jobs = 3;
  CHECK(one == run(cfg));
  std::istringstream lines(one);
  std::string header;
  std::getline(lines, header);
  CHECK(header.rfind("epsilon,S_table_pipeline,S_closed_form,violated,v_min", 0) == 0);
  std::size_t rows = 0;
  for (std::string l; std::getline(lines, l);) ++rows;
  CHECK(rows == 11);
}

TEST_CASE("json output carries the column names") {
  RunConfig cfg;
  cfg.command = "fritz-scan";
  cfg.eps_grid = "0.2";
  cfg.format = "json";
  const auto doc = nlohmann::json::parse(run(cfg));
  CHECK(doc.at("command") == "fritz-scan");
  CHECK(doc.at("rows").size() == 1);
  CHECK(doc.at("columns")[0] == "epsilon");
}

TEST_CASE("do-demo reports vanishing residuals") {
  RunConfig cfg;
  cfg.command = "do-demo";
  cfg.scenario = "instrumental";
  cfg.format = "json";
  const auto doc = nlohmann::json::parse(run(cfg));
  std::size_t residuals = 0;
  for (const auto& row : doc.at("rows")) {
    if (row.at("table") == "residual") {
      ++residuals;
      CHECK(std::abs(row.at("p").get<double>()) <= 1e-10);
    }
  }
  CHECK(residuals > 0);
}

TEST_CASE("rgb4-noise with a bracket that has no transition is flagged, not fatal") {
  RunConfig cfg;
  cfg.command = "rgb4-noise";
  cfg.v_range = "0.5:0.6";
  const auto out = run(cfg);
  CHECK(out.find("no_transition") != std::string::npos);
}

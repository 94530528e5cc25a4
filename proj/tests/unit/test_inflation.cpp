#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "latentsplit/certify.hpp"
#include "latentsplit/error.hpp"
#include "latentsplit/inflation.hpp"
#include "latentsplit/scenarios.hpp"

using namespace latentsplit;

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

JointDag rgb4_joint() { return build_joint_dag(triangle_network(4), {{"gamma", "A", std::nullopt}}); }

Behavior uniform(std::vector<Variable> vars) {
  const auto n = tuple_count(vars);
  return Behavior(std::move(vars), {}, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

const LpRow* find_row(const LinearProgram& lp, const std::string& name) {
  for (const auto& r : lp.rows) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("joint DAG of the triangle with gamma->A split") {
  const auto j = rgb4_joint();
  CHECK(j.network.observed().size() == 4);
  CHECK(j.intervened == std::vector<std::string>{"A"});
  CHECK(j.hat_of.at("A") == "hat(A)");
  REQUIRE(j.tables.size() == 2);
  CHECK(j.tables[0].key == "obs");
  CHECK(j.tables[1].key == "int[A]");
  CHECK(j.find_table("int") == &j.tables[1]);
  CHECK(j.find_table("int[B]") == nullptr);
  CHECK(j.tables[1].variable_of.at("hat(A)") == "A");
  CHECK(j.tables[1].variable_of.at("B") == "B");
  CHECK(kind_of([] { (void)build_joint_dag(triangle_network(2), {{"alpha", "A", std::nullopt}}); }) ==
        ErrorKind::NotAnEdge);
}

TEST_CASE("carrot joint DAG has every subset table") {
  const auto j = build_joint_dag(triangle_network(2), {{"beta", "A", std::nullopt}, {"alpha", "B", std::nullopt}});
  CHECK(j.network.observed().size() == 5);
  CHECK(j.tables.size() == 4);
  const auto infl = build_inflation(j, "carrot");
  CHECK(infl.observed().size() == 5);
  Knowns k;
  k.emplace("obs", uniform({{"A", 2}, {"B", 2}, {"C", 2}}));
  const auto lp = build_lp(infl, k, {.symmetry = false});
  CHECK(lp.num_columns == 32);
  CHECK(kind_of([&] { (void)build_inflation(rgb4_joint(), "carrot"); }) == ErrorKind::WiringInconsistent);
}

TEST_CASE("rgb4-fig5 preset") {
  const auto infl = build_inflation(rgb4_joint(), "rgb4-fig5");
  REQUIRE(infl.observed().size() == 7);
  std::vector<std::string> names;
  for (auto k : infl.observed()) names.push_back(infl.nodes()[k].name);
  CHECK(names == std::vector<std::string>{"A^0", "hat(A)^00", "B^0", "C^0", "A^01", "hat(A)^01", "C^10"});
  for (std::size_t k = 0; k < 7; ++k) CHECK(infl.card(k) == 4);
  // Every observed copy sees one copy of each original latent parent.
  const auto a01 = infl.index_of("A^01");
  std::vector<std::string> pa;
  for (std::size_t k = 0; k < 7; ++k) {
    if (infl.observed()[k] == a01) {
      for (auto p : infl.parents(k)) pa.push_back(infl.nodes()[p].name);
    }
  }
  std::sort(pa.begin(), pa.end());
  CHECK(pa == std::vector<std::string>{"beta^1", "gamma^0"});
  CHECK(infl.symmetries().front() == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6});
  CHECK(kind_of([] { (void)build_inflation(rgb4_joint(), "no-such-preset"); }) == ErrorKind::WiringInconsistent);
}

TEST_CASE("injectable sets include the pair sharing beta^1") {
  const auto infl = build_inflation(rgb4_joint(), "rgb4-fig5");
  const auto sets = injectable_sets(infl, {0}, 2, false);
  // observed positions: A^01 = 4, C^10 = 6
  const auto it = std::find_if(sets.begin(), sets.end(),
                               [](const InjectableSet& s) { return s.nodes == std::vector<std::size_t>{4, 6}; });
  REQUIRE(it != sets.end());
  REQUIRE(it->blocks.size() == 1);
  CHECK(it->blocks[0].table == 0);
  // A^0 and A^01 share gamma^0 but copy the same original twice.
  const bool aa = std::any_of(sets.begin(), sets.end(),
                              [](const InjectableSet& s) { return s.nodes == std::vector<std::size_t>{0, 4}; });
  CHECK_FALSE(aa);
}

TEST_CASE("wiring from JSON is checked") {
  const auto j = build_joint_dag(triangle_network(2), {});
  nlohmann::json doc = {
      {"latent", {{{"name", "a0"}, {"original", "alpha"}}, {{"name", "b0"}, {"original", "beta"}},
                  {{"name", "g0"}, {"original", "gamma"}}}},
      {"observed",
       {{{"name", "A0"}, {"original", "A"}, {"parents", {"b0", "g0"}}},
        {{"name", "B0"}, {"original", "B"}, {"parents", {"g0", "a0"}}},
        {{"name", "C0"}, {"original", "C"}, {"parents", {"a0", "b0"}}}}}};
  CHECK(inflation_from_json(j, doc).observed().size() == 3);
  auto wrong = doc;
  wrong["observed"][0]["parents"] = {"a0", "g0"};  // A does not read alpha
  CHECK(kind_of([&] { (void)inflation_from_json(j, wrong); }) == ErrorKind::WiringInconsistent);
  auto missing = doc;
  missing["observed"][1]["parents"] = {"g0"};
  CHECK(kind_of([&] { (void)inflation_from_json(j, missing); }) == ErrorKind::WiringInconsistent);
  CHECK(kind_of([&] { (void)inflation_from_json(j, nlohmann::json::object()); }) == ErrorKind::ParseError);
}

TEST_CASE("LP rows for the fig5 inflation") {
  const auto infl = build_inflation(rgb4_joint(), "rgb4-fig5");
  const auto k = rgb4_knowns({});
  const auto lp = build_lp(infl, k, {.symmetry = false});
  CHECK(lp.num_columns == 16384);
  CHECK(lp.rows.front().name == "norm");
  const auto& obs = k.at("obs");
  std::vector<double> sum(lp.num_columns, 0.0);
  double rhs = 0.0;
  int found = 0;
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      for (std::size_t c = 0; c < 4; ++c) {
        std::ostringstream name;
        name << "{A^0,B^0,C^0}=(" << a << "," << b << "," << c << ")";
        const auto* row = find_row(lp, name.str());
        if (!row) continue;
        ++found;
        CHECK(row->rhs == doctest::Approx(obs({a, b, c})).epsilon(1e-12));
        REQUIRE(row->atoms.size() == 1);
        CHECK(row->atoms[0].table == "obs");
        for (const auto& [j, v] : row->coeffs) sum[j] += v;
        rhs += row->rhs;
      }
    }
  }
  CHECK(found == 64);
  // The base rows partition the tuples, so they add up to the normalization row.
  const auto& norm = lp.rows.front();
  for (const auto& [j, v] : norm.coeffs) CHECK(sum[j] == v);
  CHECK(rhs == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("symmetry reduces columns without changing the verdict") {
  const auto infl = build_inflation(rgb4_joint(), "rgb4-fig5");
  Knowns k;
  k.emplace("obs", uniform({{"A", 4}, {"B", 4}, {"C", 4}}));
  k.emplace("int", uniform({{"A", 4}, {"B", 4}, {"C", 4}}));
  const auto reduced = build_lp(infl, k);
  CHECK(reduced.num_columns < 16384);
  std::size_t members = 0;
  for (const auto& m : reduced.column_members) members += m.size();
  CHECK(members == 16384);
  const auto verdict = solve_feasibility(reduced);
  CHECK(verdict.feasible());
  CHECK(max_residual(reduced, verdict.point) <= 1e-9);
  const auto x = reduced.expand_point(verdict.point);
  CHECK(x.size() == 16384);
}

TEST_CASE("build_lp checks its knowns") {
  const auto infl = build_inflation(rgb4_joint(), "rgb4-fig5");
  auto k = rgb4_knowns({});
  Knowns no_obs{{"int", k.at("int")}};
  CHECK(kind_of([&] { (void)build_lp(infl, no_obs); }) == ErrorKind::UnknownBehaviorReference);
  Knowns extra = k;
  extra.emplace("int[B]", k.at("int"));
  CHECK(kind_of([&] { (void)build_lp(infl, extra); }) == ErrorKind::UnknownBehaviorReference);
  Knowns small{{"obs", uniform({{"A", 2}, {"B", 2}, {"C", 2}})}};
  CHECK(kind_of([&] { (void)build_lp(infl, small); }) == ErrorKind::CardinalityMismatch);
  Knowns conditioned{{"obs", Behavior({{"A", 4}, {"B", 4}, {"C", 4}}, {{"x", 2}})}};
  CHECK(kind_of([&] { (void)build_lp(infl, conditioned); }) == ErrorKind::PreconditionViolated);
}

TEST_CASE("LP text round trip") {
  const auto infl = build_inflation(rgb4_joint(), "rgb4-fig5");
  const auto lp = build_lp(infl, rgb4_knowns({}));
  std::stringstream text;
  lp.write_text(text);
  const auto back = LinearProgram::read_text(text);
  REQUIRE(back.num_rows() == lp.num_rows());
  CHECK(back.num_columns == lp.num_columns);
  for (std::size_t r = 0; r < lp.num_rows(); ++r) {
    CHECK(back.rows[r].name == lp.rows[r].name);
    CHECK(back.rows[r].coeffs == lp.rows[r].coeffs);
    CHECK(back.rows[r].rhs == lp.rows[r].rhs);
  }
  std::istringstream bad("VARS 3\nE r : 1*x7 = 1\n");
  CHECK(kind_of([&] { (void)LinearProgram::read_text(bad); }) == ErrorKind::ParseError);
}

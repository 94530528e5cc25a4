#include <doctest.h>

#include <random>

#include "classical_triangle.hpp"
#include "latentsplit/certify.hpp"
#include "latentsplit/error.hpp"
#include "latentsplit/witness.hpp"

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

Knowns coin() { return {{"obs", Behavior({{"A", 2}}, {}, {0.25, 0.75})}}; }

}  // namespace

TEST_CASE("witness evaluation on hand-made polynomials") {
  const auto k = coin();
  CHECK(evaluate_witness({}, k) == 0.0);
  WitnessPolynomial w;
  w.terms.push_back({2.0, {}});
  w.terms.push_back({-1.0, {{"obs", {{"A", {1}}}}, {"obs", {{"A", {1}}}}}});
  CHECK(evaluate_witness(w, k) == doctest::Approx(2.0 - 0.5625));
  w.terms.push_back({1.0, {{"int", {{"A", {0}}}}}});
  CHECK(kind_of([&] { (void)evaluate_witness(w, k); }) == ErrorKind::UnknownAtomReference);
  WitnessPolynomial bad_var{{{1.0, {{"obs", {{"Z", {0}}}}}}}};
  CHECK(kind_of([&] { (void)evaluate_witness(bad_var, k); }) == ErrorKind::UnknownAtomReference);
}

TEST_CASE("witness JSON round trip") {
  const auto w = rgb4_reference_witness();
  const auto back = witness_from_json(witness_to_json(w));
  REQUIRE(back.terms.size() == w.terms.size());
  for (std::size_t i = 0; i < w.terms.size(); ++i) {
    CHECK(back.terms[i].coef == w.terms[i].coef);
    CHECK(back.terms[i].atoms == w.terms[i].atoms);
  }
  CHECK(kind_of([] { (void)witness_from_json(nlohmann::json{{"terms", 3}}); }) == ErrorKind::ParseError);
}

TEST_CASE("reference witness value at the default point") {
  const auto w = rgb4_reference_witness();
  const double value = evaluate_witness(w, rgb4_knowns({}));
  CHECK(value == doctest::Approx(-2.49e-4).epsilon(0.01));
}

TEST_CASE("extraction needs an infeasible verdict of the same program") {
  LinearProgram lp;
  lp.num_columns = 2;
  lp.rows.push_back({"norm", {{0, 1.0}, {1, 1.0}}, 1.0, {}});
  lp.rows.push_back({"a", {{0, 1.0}, {1, 1.0}}, 0.25, {{"obs", {{"A", {0}}}}}});
  const auto v = solve_feasibility(lp);
  REQUIRE_FALSE(v.feasible());
  const auto w = extract_witness(v, lp);
  // b^T y < 0 on these knowns, scaled so the largest |coef| is 1.
  CHECK(evaluate_witness(w, coin()) < 0);
  double biggest = 0;
  for (const auto& t : w.terms) biggest = std::max(biggest, std::abs(t.coef));
  CHECK(biggest == doctest::Approx(1.0));

  FeasibilityVerdict feasible;
  CHECK(kind_of([&] { (void)extract_witness(feasible, lp); }) == ErrorKind::PreconditionViolated);
  FeasibilityVerdict wrong = v;
  wrong.certificate.push_back(0.0);
  CHECK(kind_of([&] { (void)extract_witness(wrong, lp); }) == ErrorKind::PreconditionViolated);

  // Doubling the certificate leaves the normalized witness unchanged.
  FeasibilityVerdict twice = v;
  for (auto& y : twice.certificate) y *= 2;
  const auto w2 = extract_witness(twice, lp);
  REQUIRE(w2.terms.size() == w.terms.size());
  for (std::size_t i = 0; i < w.terms.size(); ++i) CHECK(w2.terms[i].coef == doctest::Approx(w.terms[i].coef));
}

TEST_CASE("extracted RGB4 witness is negative on the quantum data") {
  const auto c = certify_rgb4({});
  REQUIRE_FALSE(c.verdict.feasible());
  REQUIRE(c.witness);
  CHECK(c.witness_value < -1e-5);
  CHECK(evaluate_witness(*c.witness, rgb4_knowns({})) == doctest::Approx(c.witness_value));
}

TEST_CASE("witnesses are non-negative on classical triangle data") {
  const auto extracted = *certify_rgb4({}).witness;
  const auto reference = rgb4_reference_witness();
  std::mt19937_64 rng(5);
  double lowest_extracted = 1.0, lowest_reference = 1.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const auto k = testsupport::random_classical_rgb4_pair(rng, trial % 2 == 0 ? 1.0 : 0.5);
    lowest_extracted = std::min(lowest_extracted, evaluate_witness(extracted, k));
    lowest_reference = std::min(lowest_reference, evaluate_witness(reference, k));
  }
  CHECK(lowest_extracted >= -1e-8);
  CHECK(lowest_reference >= -1e-8);
}

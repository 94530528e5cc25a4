#include <doctest.h>

#include "latentsplit/behavior.hpp"
#include "latentsplit/error.hpp"

using namespace latentsplit;

TEST_CASE("tuple encoding is mixed radix with the first variable most significant") {
  const std::vector<Variable> vars{{"a", 2}, {"b", 3}};
  CHECK(tuple_count(vars) == 6);
  const std::vector<std::size_t> v{1, 2};
  CHECK(encode_tuple(vars, v) == 5);
  CHECK(decode_tuple(vars, 4) == std::vector<std::size_t>{1, 1});
}

TEST_CASE("marginals and event probabilities") {
  // p(a,b) with a in {0,1}, b in {0,1,2}
  Behavior p({{"a", 2}, {"b", 3}}, {}, {0.1, 0.2, 0.1, 0.3, 0.2, 0.1});
  p.validate();
  const auto pb = p.marginal({"b"});
  CHECK(pb({0}) == doctest::Approx(0.4));
  CHECK(pb({2}) == doctest::Approx(0.2));
  const auto ba = p.marginal({"b", "a"});
  CHECK(ba({1, 0}) == doctest::Approx(0.2));
  CHECK(p.probability({{"a", {1}}, {"b", {0, 2}}}) == doctest::Approx(0.4));
  CHECK(p.probability({}) == doctest::Approx(1.0));
}

TEST_CASE("conditional blocks are validated per condition") {
  Behavior ok({{"a", 2}}, {{"x", 2}}, {0.5, 0.5, 1.0, 0.0});
  CHECK_NOTHROW(ok.validate());
  CHECK(ok.at(0, 1) == 1.0);
  Behavior bad({{"a", 2}}, {{"x", 2}}, {0.5, 0.5, 0.9, 0.0});
  CHECK_THROWS_AS(bad.validate(), Error);
  Behavior negative({{"a", 2}}, {}, {1.2, -0.2});
  CHECK_THROWS_AS(negative.validate(), Error);
}

TEST_CASE("difference of mismatched shapes is rejected") {
  Behavior p({{"a", 2}}, {}, {0.5, 0.5});
  Behavior q({{"a", 3}}, {}, {0.5, 0.5, 0.0});
  try {
    (void)p.max_abs_difference(q);
    FAIL("expected CardinalityMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CardinalityMismatch);
  }
  Behavior r({{"a", 2}}, {}, {0.25, 0.75});
  CHECK(p.max_abs_difference(r) == doctest::Approx(0.25));
}

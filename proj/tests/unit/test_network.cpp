#include <doctest.h>

#include "born_oracle.hpp"
#include "latentsplit/error.hpp"
#include "latentsplit/network.hpp"
#include "latentsplit/scenarios.hpp"
#include "random_models.hpp"

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

// Deterministic response table p(party | parents) from a function of parent values.
Behavior deterministic(const std::string& party, std::size_t card, std::vector<Variable> parents,
                       const std::function<std::size_t(const std::vector<std::size_t>&)>& f) {
  Behavior b({{party, card}}, parents);
  for (std::size_t c = 0; c < b.condition_count(); ++c) b.at(f(decode_tuple(parents, c)), c) = 1.0;
  return b;
}

}  // namespace

TEST_CASE("invalid networks are rejected") {
  CHECK(kind_of([] { CausalNetwork({{"A", 2}, {"B", 2}}, {}, {{"A", "B"}, {"B", "A"}}); }) ==
        ErrorKind::InvalidNetwork);
  CHECK(kind_of([] { CausalNetwork({{"A", 2}}, {"l", "m"}, {{"l", "m"}, {"m", "A"}}); }) ==
        ErrorKind::InvalidNetwork);
  CHECK(kind_of([] { CausalNetwork({{"A", 2}}, {"l", "m"}, {{"l", "A"}}); }) == ErrorKind::InvalidNetwork);
  CHECK(kind_of([] { CausalNetwork({{"A", 2}}, {"l"}, {{"l", "Z"}}); }) == ErrorKind::InvalidNetwork);
}

TEST_CASE("network accessors") {
  const auto s = instrumental_strategy();
  const auto& net = s.network;
  CHECK(net.is_input("X"));
  CHECK_FALSE(net.is_input("A"));
  CHECK(net.observed_parents("B") == std::vector<std::string>{"A"});
  CHECK(net.latent_parents("A") == std::vector<std::string>{"lambda"});
  const auto order = net.topological_observed();
  CHECK(std::find(order.begin(), order.end(), "A") < std::find(order.begin(), order.end(), "B"));
  CHECK(kind_of([&] { (void)net.observed_node("Q"); }) == ErrorKind::UnknownParty);
}

TEST_CASE("classical triangle with parity responses") {
  const auto net = triangle_network(2);
  ClassicalModel m;
  for (const char* l : {"alpha", "beta", "gamma"}) m.sources[l] = {0.5, 0.5};
  auto xor2 = [](const std::vector<std::size_t>& v) { return v[0] ^ v[1]; };
  m.responses.emplace("A", deterministic("A", 2, {{"beta", 2}, {"gamma", 2}}, xor2));
  m.responses.emplace("B", deterministic("B", 2, {{"gamma", 2}, {"alpha", 2}}, xor2));
  m.responses.emplace("C", deterministic("C", 2, {{"alpha", 2}, {"beta", 2}}, xor2));
  const auto p = classical_behavior(net, m);
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      for (std::size_t c = 0; c < 2; ++c) CHECK(p({a, b, c}) == doctest::Approx(((a ^ b ^ c) == 0) ? 0.25 : 0.0));
    }
  }
}

TEST_CASE("classical model errors and degenerate models") {
  const CausalNetwork bell({{"A", 2}, {"B", 2}}, {"l"}, {{"l", "A"}, {"l", "B"}});
  ClassicalModel m;
  m.sources["l"] = {0.5, 0.5};
  auto copy = [](const std::vector<std::size_t>& v) { return v[0]; };
  m.responses.emplace("A", deterministic("A", 2, {{"l", 2}}, copy));
  m.responses.emplace("B", deterministic("B", 2, {{"l", 2}}, copy));
  const auto p = classical_behavior(bell, m);
  CHECK(p({0, 0}) + p({1, 1}) == doctest::Approx(1.0));

  ClassicalModel point = m;
  point.sources["l"] = {1.0, 0.0};
  CHECK(classical_behavior(bell, point)({0, 0}) == doctest::Approx(1.0));

  ClassicalModel wrong = m;
  wrong.responses.erase("B");
  wrong.responses.emplace("B", deterministic("B", 2, {{"q", 2}}, copy));
  CHECK(kind_of([&] { (void)classical_behavior(bell, wrong); }) == ErrorKind::ModelMismatch);
}

TEST_CASE("quantum behavior of maximally mixed sources is uniform") {
  auto s = rgb4_strategy({});
  for (auto& [name, st] : s.states) st = DensityOperator::maximally_mixed(st.layout());
  std::vector<ComplexVector> comp(4, ComplexVector::Zero(4));
  for (int i = 0; i < 4; ++i) comp[static_cast<std::size_t>(i)](i) = 1.0;
  for (auto& [name, povm] : s.measurements) povm = Povm::projective(povm.layout(), comp);
  const auto p = quantum_behavior(s);
  for (double x : p.table()) CHECK(x == doctest::Approx(1.0 / 64));
}

TEST_CASE("quantum behavior matches the dense Born oracle") {
  SUBCASE("RGB4 at u=1") {
    Rgb4Params prm;
    prm.u = 1.0;
    const auto s = rgb4_strategy(prm);
    CHECK(quantum_behavior(s).max_abs_difference(testsupport::dense_born(s)) <= 1e-12);
  }
  SUBCASE("RGB4 at u=0.85 with noise") {
    Rgb4Params prm;
    prm.v_beta = 0.9;
    const auto s = rgb4_strategy(prm);
    CHECK(quantum_behavior(s).max_abs_difference(testsupport::dense_born(s)) <= 1e-12);
  }
  SUBCASE("instrumental and UC") {
    for (const auto& s : {instrumental_strategy(), uc_strategy(0.8)}) {
      CHECK(quantum_behavior(s).max_abs_difference(testsupport::dense_born(s)) <= 1e-12);
    }
  }
  SUBCASE("random networks with observed edges") {
    testsupport::Rng rng(11);
    for (int i = 0; i < 40; ++i) {
      const auto s = testsupport::random_strategy(rng, testsupport::random_network(rng, true));
      CHECK(quantum_behavior(s).max_abs_difference(testsupport::dense_born(s)) <= 1e-12);
    }
  }
}

TEST_CASE("Fritz observational correlator") {
  for (double eps : {0.1, 0.3, 0.7}) {
    const auto p = quantum_behavior(fritz_strategy({eps, 1.0}));
    const double e1 = p({0, 0, 1}) + p({1, 1, 1}) - p({0, 1, 1}) - p({1, 0, 1});
    CHECK(e1 == doctest::Approx(eps * eps / std::sqrt(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("diagonal strategies agree with classical models") {
  testsupport::Rng rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto net = triangle_network(2);
  for (int trial = 0; trial < 100; ++trial) {
    // Each source: one classical value copied to both children (diagonal on |00>,|11>).
    QuantumStrategy s{net, {}, {}};
    ClassicalModel m;
    for (const auto& l : net.latent()) {
      const double q = u(rng);
      m.sources[l] = {q, 1.0 - q};
      const auto kids = net.children(l);
      const std::vector<double> diag{q, 0.0, 0.0, 1.0 - q};
      s.states.emplace(l, DensityOperator::diagonal(
                              SubsystemLayout({{slot_label(l, kids[0]), 2}, {slot_label(l, kids[1]), 2}}), diag));
    }
    for (const auto& p : net.parties()) {
      const auto parents = net.latent_parents(p.name);
      Behavior resp({{p.name, 2}}, {{parents[0], 2}, {parents[1], 2}});
      std::vector<ComplexMatrix> elems(2, ComplexMatrix::Zero(4, 4));
      for (std::size_t c = 0; c < 4; ++c) {
        const double r = u(rng);
        resp.at(0, c) = r;
        resp.at(1, c) = 1.0 - r;
        elems[0](static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c)) = r;
        elems[1](static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c)) = 1.0 - r;
      }
      m.responses.emplace(p.name, resp);
      s.measurements.emplace(
          p.name, Povm(SubsystemLayout({{slot_label(parents[0], p.name), 2}, {slot_label(parents[1], p.name), 2}}),
                       {elems}));
    }
    CHECK(quantum_behavior(s).max_abs_difference(classical_behavior(net, m)) <= 1e-10);
  }
}

TEST_CASE("single-party marginals equal the reduced-state Born rule") {
  const auto s = rgb4_strategy({});
  const auto pa = quantum_behavior(s).marginal({"A"});
  const auto beta_a = partial_trace(s.states.at("beta"), {"beta->C"});
  const auto gamma_a = partial_trace(s.states.at("gamma"), {"gamma->B"});
  const auto local = tensor(beta_a, gamma_a);
  const auto& povm = s.measurements.at("A");
  for (std::size_t a = 0; a < 4; ++a) {
    const double direct = (local.matrix() * povm.element(a)).trace().real();
    CHECK(pa({a}) == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("do on a triangle party is the observational marginal") {
  const auto s = rgb4_strategy({});
  const auto obs_bc = quantum_behavior(s).marginal({"B", "C"});
  const auto d = pearl_do_quantum(s, "A");
  REQUIRE(d.conditions().size() == 1);
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t o = 0; o < d.outcome_count(); ++o) CHECK(std::abs(d.at(o, a) - obs_bc.at(o)) <= 1e-12);
  }
}

TEST_CASE("pearl_do_quantum edge cases") {
  const CausalNetwork solo({{"A", 2}}, {"l"}, {{"l", "A"}});
  QuantumStrategy s{solo, {}, {}};
  s.states.emplace("l", DensityOperator::maximally_mixed(SubsystemLayout({{slot_label("l", "A"), 2}})));
  std::vector<ComplexVector> comp(2, ComplexVector::Zero(2));
  comp[0](0) = comp[1](1) = 1.0;
  s.measurements.emplace("A", Povm::projective(SubsystemLayout({{slot_label("l", "A"), 2}}), comp));
  const auto d = pearl_do_quantum(s, "A");
  CHECK(d.outcome_count() == 1);
  for (std::size_t c = 0; c < d.condition_count(); ++c) CHECK(d.at(0, c) == doctest::Approx(1.0));
  CHECK(kind_of([&] { (void)pearl_do_quantum(s, "Z"); }) == ErrorKind::UnknownParty);
}

TEST_CASE("instrumental do-conditional is Tr(rho (1 x E_b|a))") {
  const auto s = instrumental_strategy(0.9);
  const auto d = pearl_do_quantum(s, "A");
  const auto rho_b = partial_trace(s.states.at("lambda"), {"lambda->A"});
  const auto& eb = s.measurements.at("B");
  const auto iB = d.find_outcome("B");
  REQUIRE(iB.has_value());
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) {
        const double expect = (rho_b.matrix() * eb.element(b, a)).trace().real();
        const std::vector<std::size_t> out{b}, cond{x, a};
        CHECK(d(out, cond) == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("strategy validation catches layout mismatches") {
  auto s = rgb4_strategy({});
  s.measurements.erase("A");
  std::vector<ComplexVector> comp(4, ComplexVector::Zero(4));
  for (int i = 0; i < 4; ++i) comp[static_cast<std::size_t>(i)](i) = 1.0;
  s.measurements.emplace("A", Povm::projective(SubsystemLayout({{"beta->A", 2}, {"alpha->A", 2}}), comp));
  CHECK(kind_of([&] { s.validate(); }) == ErrorKind::LayoutMismatch);
}

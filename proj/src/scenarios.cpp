#include "latentsplit/scenarios.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <sstream>

#include "latentsplit/error.hpp"
#include "latentsplit/splitting.hpp"

namespace latentsplit {

namespace {

void check_unit(double x, const char* name, bool open = false) {
  const bool ok = open ? (x > 0.0 && x < 1.0) : (x >= 0.0 && x <= 1.0);
  if (!ok || std::isnan(x)) {
    std::ostringstream msg;
    msg << name << " = " << x << " is outside " << (open ? "(0,1)" : "[0,1]");
    throw Error(ErrorKind::ParamOutOfRange, msg.str());
  }
}

SubsystemLayout qubits(const std::string& first, const std::string& second) {
  return SubsystemLayout({{first, 2}, {second, 2}});
}

DensityOperator noisy_pure(SubsystemLayout layout, const ComplexVector& psi, double v) {
  const ComplexMatrix pure = psi * psi.adjoint();
  const ComplexMatrix mixed = ComplexMatrix::Identity(4, 4) / 4.0;
  return DensityOperator(std::move(layout), v * pure + (1.0 - v) * mixed);
}

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

ComplexVector phi_plus() {
  ComplexVector phi = ComplexVector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  return phi;
}

// {(1 + o)/2, (1 - o)/2} for a +-1 valued observable o.
std::vector<ComplexMatrix> dichotomic(const ComplexMatrix& o) {
  const ComplexMatrix id = ComplexMatrix::Identity(o.rows(), o.cols());
  return {0.5 * (id + o), 0.5 * (id - o)};
}

struct Paulis {
  ComplexMatrix z = ComplexMatrix::Zero(2, 2), x = ComplexMatrix::Zero(2, 2);
  Paulis() {
    z << 1, 0, 0, -1;
    x << 0, 1, 1, 0;
  }
};

}  // namespace

CausalNetwork triangle_network(std::size_t card) {
  return CausalNetwork({{"A", card}, {"B", card}, {"C", card}}, {"alpha", "beta", "gamma"},
                       {{"alpha", "B"}, {"alpha", "C"}, {"beta", "A"}, {"beta", "C"}, {"gamma", "A"}, {"gamma", "B"}});
}

QuantumStrategy rgb4_strategy(const Rgb4Params& p) {
  check_unit(p.u, "u");
  check_unit(p.lambda0, "lambda0", true);
  check_unit(p.v_alpha, "v_alpha");
  check_unit(p.v_beta, "v_beta");
  check_unit(p.v_gamma, "v_gamma");

  const double l1 = std::sqrt(1.0 - p.lambda0 * p.lambda0);
  ComplexVector psi = ComplexVector::Zero(4);
  psi(1) = p.lambda0;
  psi(2) = l1;

  const double w = std::sqrt(1.0 - p.u * p.u);
  std::vector<ComplexVector> basis(4, ComplexVector::Zero(4));
  basis[0](0) = 1.0;
  basis[1](1) = p.u;
  basis[1](2) = w;
  basis[2](1) = w;
  basis[2](2) = -p.u;
  basis[3](3) = 1.0;

  QuantumStrategy s{triangle_network(4), {}, {}};
  s.states.emplace("alpha", noisy_pure(qubits("alpha->C", "alpha->B"), psi, p.v_alpha));
  s.states.emplace("beta", noisy_pure(qubits("beta->A", "beta->C"), psi, p.v_beta));
  s.states.emplace("gamma", noisy_pure(qubits("gamma->B", "gamma->A"), psi, p.v_gamma));
  s.measurements.emplace("A", Povm::projective(qubits("beta->A", "gamma->A"), basis));
  s.measurements.emplace("B", Povm::projective(qubits("gamma->B", "alpha->B"), basis));
  s.measurements.emplace("C", Povm::projective(qubits("alpha->C", "beta->C"), basis));
  return s;
}

QuantumStrategy fritz_strategy(const FritzParams& p) {
  check_unit(p.epsilon, "epsilon");
  check_unit(p.visibility, "visibility");
  const double eps = p.epsilon;

  ComplexMatrix sz(2, 2), sx(2, 2);
  sz << 1, 0, 0, -1;
  sx << 0, 1, 1, 0;
  const double r = 1.0 / std::sqrt(2.0);
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  const ComplexMatrix alice[2] = {sz, sx};
  const ComplexMatrix bob[2] = {r * (sx - sz), r * (sz + sx)};

  // Outcome 0 <-> eigenvalue +1. The classical bit sits on the first slot.
  auto controlled = [&](const ComplexMatrix (&obs)[2]) {
    std::vector<ComplexMatrix> elements;
    for (int outcome = 0; outcome < 2; ++outcome) {
      const double sign = outcome == 0 ? 1.0 : -1.0;
      ComplexMatrix e = ComplexMatrix::Zero(4, 4);
      for (int bit = 0; bit < 2; ++bit) {
        ComplexMatrix proj = ComplexMatrix::Zero(2, 2);
        proj(bit, bit) = 1.0;
        e += kron(proj, 0.5 * (id2 + sign * obs[bit]));
      }
      elements.push_back(e);
    }
    return elements;
  };

  const ComplexVector phi = phi_plus();
  const std::vector<double> bit{1.0 - eps, 0.0, 0.0, eps};

  QuantumStrategy s{triangle_network(2), {}, {}};
  s.states.emplace("alpha", DensityOperator::diagonal(qubits("alpha->B", "alpha->C"), bit));
  s.states.emplace("beta", DensityOperator::diagonal(qubits("beta->A", "beta->C"), bit));
  s.states.emplace("gamma", noisy_pure(qubits("gamma->A", "gamma->B"), phi, p.visibility));
  s.measurements.emplace("A", Povm(qubits("beta->A", "gamma->A"), {controlled(alice)}));
  s.measurements.emplace("B", Povm(qubits("alpha->B", "gamma->B"), {controlled(bob)}));

  ComplexVector both = ComplexVector::Zero(4);
  both(3) = 1.0;
  const ComplexMatrix c1 = projector(both);
  s.measurements.emplace("C", Povm(qubits("alpha->C", "beta->C"),
                                   {{ComplexMatrix::Identity(4, 4) - c1, c1}}));
  return s;
}

FritzTables fritz_tables(const FritzParams& p) {
  const auto s = fritz_strategy(p);
  const SplitSpec alpha{"alpha", "B", std::nullopt};
  const SplitSpec beta{"beta", "A", std::nullopt};
  return {quantum_behavior(s), interventional_behavior(s, {alpha}), interventional_behavior(s, {beta}),
          interventional_behavior(s, {beta, alpha})};
}

QuantumStrategy instrumental_strategy(double visibility) {
  check_unit(visibility, "visibility");
  const Paulis p;
  const double r = 1.0 / std::sqrt(2.0);
  CausalNetwork net({{"X", 2}, {"A", 2}, {"B", 2}}, {"lambda"},
                    {{"lambda", "A"}, {"lambda", "B"}, {"X", "A"}, {"A", "B"}});
  QuantumStrategy s{std::move(net), {}, {}};
  s.states.emplace("lambda", noisy_pure(qubits("lambda->A", "lambda->B"), phi_plus(), visibility));
  s.measurements.emplace("A", Povm(SubsystemLayout({{"lambda->A", 2}}), {dichotomic(p.z), dichotomic(p.x)}));
  s.measurements.emplace("B", Povm(SubsystemLayout({{"lambda->B", 2}}),
                                   {dichotomic(r * (p.z + p.x)), dichotomic(r * (p.z - p.x))}));
  return s;
}

QuantumStrategy uc_strategy(double visibility) {
  check_unit(visibility, "visibility");
  const Paulis p;
  CausalNetwork net({{"A", 2}, {"B", 2}, {"C", 2}}, {"alpha", "gamma"},
                    {{"gamma", "A"}, {"gamma", "B"}, {"alpha", "B"}, {"alpha", "C"}, {"B", "A"}, {"B", "C"}});
  QuantumStrategy s{std::move(net), {}, {}};
  s.states.emplace("gamma", noisy_pure(qubits("gamma->A", "gamma->B"), phi_plus(), visibility));
  s.states.emplace("alpha", noisy_pure(qubits("alpha->B", "alpha->C"), phi_plus(), visibility));
  s.measurements.emplace("A", Povm(SubsystemLayout({{"gamma->A", 2}}), {dichotomic(p.z), dichotomic(p.x)}));
  s.measurements.emplace("B", Povm(qubits("gamma->B", "alpha->B"), {dichotomic(kron(p.z, p.z))}));
  s.measurements.emplace("C", Povm(SubsystemLayout({{"alpha->C", 2}}), {dichotomic(p.z), dichotomic(p.x)}));
  return s;
}

void write_table_csv(std::ostream& out, const Behavior& table) {
  const auto& vars = table.outcomes();
  std::vector<Variable> all = table.conditions();
  all.insert(all.end(), vars.begin(), vars.end());
  for (const auto& v : all) {
    std::string name = v.name;
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::tolower(ch); });
    out << name << ',';
  }
  out << "p\n";
  const auto old_precision = out.precision();
  out << std::setprecision(17);
  for (std::size_t c = 0; c < table.condition_count(); ++c) {
    const auto cv = decode_tuple(table.conditions(), c);
    for (std::size_t o = 0; o < table.outcome_count(); ++o) {
      for (auto x : cv) out << x << ',';
      for (auto x : decode_tuple(vars, o)) out << x << ',';
      out << table.at(o, c) << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace latentsplit

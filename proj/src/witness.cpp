#include "latentsplit/witness.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "latentsplit/error.hpp"

namespace latentsplit {

using nlohmann::json;

WitnessPolynomial extract_witness(const FeasibilityVerdict& verdict, const LinearProgram& lp) {
  if (verdict.feasible()) throw Error(ErrorKind::PreconditionViolated, "a feasible verdict carries no witness");
  if (verdict.certificate.size() != lp.num_rows()) {
    throw Error(ErrorKind::PreconditionViolated, "certificate does not belong to this program");
  }
  std::map<std::vector<EventAtom>, double> merged;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const double y = verdict.certificate[i];
    if (y == 0.0) continue;
    auto atoms = lp.rows[i].atoms;
    std::sort(atoms.begin(), atoms.end());
    merged[atoms] += y;
  }
  double scale = 0.0;
  for (const auto& [atoms, c] : merged) scale = std::max(scale, std::fabs(c));
  WitnessPolynomial w;
  if (scale == 0.0) return w;
  for (const auto& [atoms, c] : merged) {
    const double coef = c / scale;
    if (std::fabs(coef) >= 1e-12) w.terms.push_back({coef, atoms});
  }
  return w;
}

double evaluate_witness(const WitnessPolynomial& w, const Knowns& knowns) {
  std::map<EventAtom, double> cache;
  long double total = 0.0L;
  for (const auto& term : w.terms) {
    long double value = term.coef;
    for (const auto& atom : term.atoms) {
      auto it = cache.find(atom);
      if (it == cache.end()) it = cache.emplace(atom, atom_probability(knowns, atom)).first;
      value *= it->second;
    }
    total += value;
  }
  return static_cast<double>(total);
}

json witness_to_json(const WitnessPolynomial& w) {
  json terms = json::array();
  for (const auto& t : w.terms) {
    json atoms = json::array();
    for (const auto& a : t.atoms) {
      json event = json::object();
      for (const auto& [var, values] : a.event) {
        event[var] = values.size() == 1 ? json(values[0]) : json(values);
      }
      atoms.push_back({{"table", a.table}, {"event", event}});
    }
    terms.push_back({{"coef", t.coef}, {"atoms", atoms}});
  }
  return {{"terms", terms}};
}

WitnessPolynomial witness_from_json(const json& doc) {
  try {
    WitnessPolynomial w;
    for (const auto& t : doc.at("terms")) {
      WitnessTerm term{t.at("coef").get<double>(), {}};
      for (const auto& a : t.at("atoms")) {
        EventAtom atom{a.at("table").get<std::string>(), {}};
        for (const auto& [var, values] : a.at("event").items()) {
          atom.event[var] = values.is_array() ? values.get<std::vector<std::size_t>>()
                                              : std::vector<std::size_t>{values.get<std::size_t>()};
        }
        term.atoms.push_back(std::move(atom));
      }
      w.terms.push_back(std::move(term));
    }
    return w;
  } catch (const json::exception& ex) {
    throw Error(ErrorKind::ParseError, std::string("witness: ") + ex.what());
  }
}

WitnessPolynomial rgb4_reference_witness() {
  using V = std::vector<std::size_t>;
  auto atom = [](const char* table, V a, V b, V c) {
    EventAtom e{table, {}};
    if (!a.empty()) e.event["A"] = std::move(a);
    if (!b.empty()) e.event["B"] = std::move(b);
    if (!c.empty()) e.event["C"] = std::move(c);
    return e;
  };
  const auto a3 = atom("obs", {3}, {}, {});
  const auto int_3_2_01 = atom("int", {3}, {2}, {0, 1});
  const auto int_3_2_2 = atom("int", {3}, {2}, {2});
  const auto obs_3_x_12 = atom("obs", {3}, {}, {1, 2});

  WitnessPolynomial w;
  auto add = [&](double c, std::vector<EventAtom> atoms) { w.terms.push_back({c, std::move(atoms)}); };
  add(1.0, {obs_3_x_12});
  add(-1.0, {int_3_2_01});
  add(-1.0, {atom("int", {3}, {0}, {1, 2})});
  add(1.0, {atom("obs", {}, {2}, {}), a3, a3});
  add(1.0, {a3, atom("obs", {0, 2}, {0}, {1, 3})});
  add(-2.0, {int_3_2_2});
  add(-1.0, {atom("obs", {0, 2}, {}, {}), obs_3_x_12});
  // (1 - P(a=3)) (P_int(3,2,{0,1}) + 2 P_int(3,2,2))
  add(1.0, {int_3_2_01});
  add(2.0, {int_3_2_2});
  add(-1.0, {a3, int_3_2_01});
  add(-2.0, {a3, int_3_2_2});
  add(1.0, {a3, atom("obs", {0, 2}, {0, 2}, {0, 2})});
  return w;
}

}  // namespace latentsplit

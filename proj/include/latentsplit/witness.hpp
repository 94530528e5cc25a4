#pragma once

#include <vector>

#include <json.hpp>

#include "latentsplit/knowns.hpp"
#include "latentsplit/lp.hpp"

namespace latentsplit {

/// coef * product of atom probabilities; no atoms means the constant coef.
struct WitnessTerm {
  double coef = 0.0;
  std::vector<EventAtom> atoms;
};

/// Polynomial in known probabilities that is non-negative on classical data.
struct WitnessPolynomial {
  std::vector<WitnessTerm> terms;
};

/// W = b^T y written in terms of the rows' atoms, merged, scaled to a largest
/// |coef| of 1, with |coef| < 1e-12 dropped. Throws PreconditionViolated for a
/// Feasible verdict.
WitnessPolynomial extract_witness(const FeasibilityVerdict& verdict, const LinearProgram& lp);

/// Throws UnknownAtomReference.
double evaluate_witness(const WitnessPolynomial& w, const Knowns& knowns);

nlohmann::json witness_to_json(const WitnessPolynomial& w);
/// Throws ParseError.
WitnessPolynomial witness_from_json(const nlohmann::json& doc);

/// The nine-term triangle inequality for the gamma->A split, over tables
/// "obs" and "int" with parties A, B, C.
WitnessPolynomial rgb4_reference_witness();

}  // namespace latentsplit

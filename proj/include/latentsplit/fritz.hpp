#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "latentsplit/scenarios.hpp"

namespace latentsplit {

/// Agreement-minus-disagreement of a and b, restricted to c where indexed by c.
struct FritzCorrelators {
  std::array<double, 2> E_obs{};
  std::array<double, 2> E_beta{};
  std::array<double, 2> E_alpha{};
  double E_alphabeta = 0.0;
  double P_obs_c1 = 0.0;
};

/// Throws CardinalityMismatch unless every table is over binary A, B, C.
FritzCorrelators correlators(const FritzTables& tables);

/// S = E_ab P(c=1) + 2 P(c=1) - E1_obs - E1_alpha - E1_beta. Non-negative classically.
double evaluate_S(const FritzCorrelators& c);

/// S for the quantum strategy, 2e^2 + v ((4/sqrt2)(e-1)e^2 - (2/sqrt2)e^4).
/// Throws ParamOutOfRange outside [0,1]^2.
double closed_form_SQ(double epsilon, double visibility);

/// Visibility at which closed_form_SQ vanishes: sqrt2 / (1 + (1-e)^2).
double v_min(double epsilon);

/// Largest epsilon with S < 0 at visibility v: 1 - sqrt(sqrt2/v - 1). Throws
/// ParamOutOfRange when v is too small for any violation.
double epsilon_threshold(double visibility);

/// Classical model on the Fritz triangle. Sources are distributions over
/// small alphabets; responses are indexed [first parent][second parent][outcome]
/// with A(beta, gamma), B(gamma, alpha), C(alpha, beta).
struct FritzClassicalModel {
  std::vector<double> p_alpha, p_beta, p_gamma;
  std::vector<std::vector<std::array<double, 2>>> A, B, C;
};

/// Observational and split tables of a classical model; split copies of a
/// source are independent and distributed like the original.
FritzTables classical_fritz_tables(const FritzClassicalModel& m);

struct SanityReport {
  double epsilon = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::optional<double> min_S;  ///< empty when samples == 0
  std::string argmin_model_digest;
  std::size_t counterexamples = 0;  ///< samples with S < -1e-9

  nlohmann::json to_json() const;
};

/// Random classical models with alpha, beta and gamma of cardinality 4.
/// alpha and beta carry a bit of bias epsilon together with a fair auxiliary
/// bit; gamma's distribution is Dirichlet-uniform. Response tables alternate
/// between Dirichlet-uniform (even samples) and random deterministic (odd).
SanityReport classical_sanity(double epsilon, std::size_t samples, std::uint64_t seed);

}  // namespace latentsplit

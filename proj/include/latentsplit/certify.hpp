#pragma once

#include <optional>
#include <string>
#include <vector>

#include "latentsplit/inflation.hpp"
#include "latentsplit/lp.hpp"
#include "latentsplit/scenarios.hpp"
#include "latentsplit/witness.hpp"

namespace latentsplit {

/// "obs" is the triangle behavior, "int" the behavior after splitting gamma->A.
Knowns rgb4_knowns(const Rgb4Params& p);

struct CertifyOptions {
  bool obs_only = false;  ///< drop the interventional table from the LP
  std::string preset = "rgb4-fig5";
  InflationOptions inflation;
  LpOptions lp;
  SolverOptions solver;
};

struct Certification {
  LinearProgram lp;
  FeasibilityVerdict verdict;
  std::optional<WitnessPolynomial> witness;  ///< set when Infeasible
  double witness_value = 0.0;                ///< witness evaluated on the knowns used
};

/// Builds and solves the inflation LP for one RGB4 instance.
/// Propagates NumericallyAmbiguous from the solver.
Certification certify_rgb4(const Rgb4Params& p, const CertifyOptions& options = {});

enum class Source { Alpha, Beta, Gamma };

struct ThresholdOptions {
  double lo = 0.9;
  double hi = 1.0;
  double step = 1e-4;
  CertifyOptions certify;
};

struct ThresholdProbe {
  double v = 0.0;
  LpStatus status = LpStatus::Feasible;
  bool certificate_verified = false;  ///< independent Farkas recheck, Infeasible only
};

struct ThresholdResult {
  double critical = 0.0;  ///< smallest probed v that was certified nonclassical
  double last_feasible = 0.0;
  std::vector<ThresholdProbe> trace;
  bool ambiguous = false;  ///< a probe was NumericallyAmbiguous; bisection stopped there
  std::string note;
};

/// Bisects the visibility of the free sources (all set to the same v) on
/// [lo, hi]. Throws NoTransition if Infeasible at lo or Feasible at hi, and
/// PreconditionViolated for an empty free set or several untied sources.
ThresholdResult visibility_threshold(const Rgb4Params& base, const std::vector<Source>& free, bool tied,
                                     const ThresholdOptions& options = {});

}  // namespace latentsplit

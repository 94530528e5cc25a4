#include "latentsplit/certify.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "latentsplit/error.hpp"
#include "latentsplit/joint_dag.hpp"
#include "latentsplit/splitting.hpp"

namespace latentsplit {

namespace {

const SplitSequence& rgb4_split() {
  static const SplitSequence seq{{"gamma", "A", std::nullopt}};
  return seq;
}

Rgb4Params with_visibility(Rgb4Params p, const std::vector<Source>& free, double v) {
  for (Source s : free) {
    switch (s) {
      case Source::Alpha: p.v_alpha = v; break;
      case Source::Beta: p.v_beta = v; break;
      case Source::Gamma: p.v_gamma = v; break;
    }
  }
  return p;
}

}  // namespace

Knowns rgb4_knowns(const Rgb4Params& p) {
  const auto s = rgb4_strategy(p);
  return {{"obs", quantum_behavior(s)}, {"int", interventional_behavior(s, rgb4_split())}};
}

Certification certify_rgb4(const Rgb4Params& p, const CertifyOptions& options) {
  auto knowns = rgb4_knowns(p);
  if (options.obs_only) knowns.erase("int");
  const auto joint = build_joint_dag(triangle_network(4), rgb4_split());
  const auto infl = build_inflation(joint, options.preset, options.inflation);

  Certification c;
  c.lp = build_lp(infl, knowns, options.lp);
  c.verdict = solve_feasibility(c.lp, options.solver);
  if (!c.verdict.feasible()) {
    c.witness = extract_witness(c.verdict, c.lp);
    c.witness_value = evaluate_witness(*c.witness, knowns);
  }
  return c;
}

ThresholdResult visibility_threshold(const Rgb4Params& base, const std::vector<Source>& free, bool tied,
                                     const ThresholdOptions& options) {
  if (free.empty()) throw Error(ErrorKind::PreconditionViolated, "no free visibility");
  if (!tied && free.size() > 1) throw Error(ErrorKind::PreconditionViolated, "several free visibilities must be tied");
  if (!(options.lo <= options.hi) || !(options.step > 0.0) || options.lo < 0.0 || options.hi > 1.0) {
    throw Error(ErrorKind::ParamOutOfRange, "threshold bracket must satisfy 0 <= lo <= hi <= 1 and step > 0");
  }

  ThresholdResult result;
  // Returns nullopt on an ambiguous probe.
  auto probe = [&](double v) -> std::optional<LpStatus> {
    ThresholdProbe pr{v, LpStatus::Feasible, false};
    try {
      const auto c = certify_rgb4(with_visibility(base, free, v), options.certify);
      pr.status = c.verdict.status;
      if (!c.verdict.feasible()) {
        pr.certificate_verified =
            verify_certificate(c.lp, c.verdict.certificate, options.certify.solver.certificate_tol).valid;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NumericallyAmbiguous) throw;
      result.ambiguous = true;
      std::ostringstream os;
      os << "ambiguous at v=" << v << ": " << e.what();
      result.note = os.str();
      return std::nullopt;
    }
    result.trace.push_back(pr);
    return pr.status;
  };

  double lo = options.lo, hi = options.hi;
  const auto at_lo = probe(lo);
  if (!at_lo) return result;
  if (*at_lo == LpStatus::Infeasible) throw Error(ErrorKind::NoTransition, "already nonclassical at the lower visibility");
  const auto at_hi = probe(hi);
  if (!at_hi) return result;
  if (*at_hi == LpStatus::Feasible) throw Error(ErrorKind::NoTransition, "no certificate at the upper visibility");

  while (hi - lo > options.step) {
    const double mid = 0.5 * (lo + hi);
    const auto s = probe(mid);
    if (!s) return result;
    (*s == LpStatus::Feasible ? lo : hi) = mid;
  }

  // The search assumes a single transition; check the probes agree with it.
  double max_feasible = -std::numeric_limits<double>::infinity();
  double min_infeasible = std::numeric_limits<double>::infinity();
  for (const auto& p : result.trace) {
    if (p.status == LpStatus::Feasible) max_feasible = std::max(max_feasible, p.v);
    else min_infeasible = std::min(min_infeasible, p.v);
  }
  if (!(max_feasible < min_infeasible)) throw Error(ErrorKind::NumericallyAmbiguous, "probe verdicts are not monotone in v");
  result.last_feasible = lo;
  result.critical = hi;
  return result;
}

}  // namespace latentsplit

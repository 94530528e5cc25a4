// Acceptance run: one [PASS]/[FAIL] line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "latentsplit/certify.hpp"
#include "latentsplit/error.hpp"
#include "latentsplit/fritz.hpp"
#include "latentsplit/scenarios.hpp"
#include "latentsplit/splitting.hpp"
#include "random_models.hpp"

using namespace latentsplit;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Infeasible verdicts gathered by criteria 1-3, rechecked by criterion 8.
struct Certified {
  std::string what;
  bool verified = false;
  double min_reduced = 0.0;
  double dual_objective = 0.0;
};
std::vector<Certified> g_certificates;

void record(const std::string& what, const Certification& c) {
  if (c.verdict.feasible()) return;
  const auto check = verify_certificate(c.lp, c.verdict.certificate, 1e-8);
  g_certificates.push_back({what, check.valid, check.min_reduced, check.dual_objective});
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome criterion1() {
  Rgb4Params p;
  p.u = 0.85;
  CertifyOptions obs_only;
  obs_only.obs_only = true;
  const auto a = certify_rgb4(p, obs_only);
  const auto t0 = std::chrono::steady_clock::now();
  const auto b = certify_rgb4(p);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  record("u=0.85 obs+int", b);
  const double ref = evaluate_witness(rgb4_reference_witness(), rgb4_knowns(p));
  const double w = b.witness_value;
  const bool in_band = w < -1e-5 && w / -2.5e-4 >= 0.5 && w / -2.5e-4 <= 2.0;
  Outcome o;
  o.pass = a.verdict.feasible() && !b.verdict.feasible() && in_band && secs <= 60.0;
  o.detail = fmt("obs-only %s, obs+int %s, extracted witness %.4e, fixed nine-term witness %.4e, %zu columns, %.1f s",
                 a.verdict.feasible() ? "feasible" : "infeasible", b.verdict.feasible() ? "feasible" : "infeasible", w,
                 ref, b.lp.num_columns, secs);
  return o;
}

Outcome criterion2() {
  // Expected: infeasible on (0, 0.40) and (0.84, 1); either verdict accepted
  // within 0.02 of the end points 0, 0.40 and 0.84.
  Outcome o{true, ""};
  int mismatches = 0, tolerated = 0;
  std::string tolerated_points;
  for (int i = 1; i <= 49; ++i) {
    const double u = 0.02 * i;
    Rgb4Params p;
    p.u = u;
    const auto c = certify_rgb4(p);
    record(fmt("u=%.2f", u), c);
    const bool infeasible = !c.verdict.feasible();
    const bool expected = (u < 0.40) || (u > 0.84);
    if (infeasible == expected) continue;
    const bool near_end = std::abs(u - 0.0) <= 0.02 + 1e-9 || std::abs(u - 0.40) <= 0.02 + 1e-9 ||
                          std::abs(u - 0.84) <= 0.02 + 1e-9;
    if (near_end) {
      ++tolerated;
      tolerated_points += fmt(" %.2f(%s)", u, infeasible ? "infeasible" : "feasible");
    } else {
      ++mismatches;
      o.pass = false;
      o.detail += fmt(" mismatch at u=%.2f;", u);
    }
  }
  o.detail += fmt("49 points, %d mismatches, %d inside end-point tolerance:%s", mismatches, tolerated,
                  tolerated_points.empty() ? " none" : tolerated_points.c_str());
  return o;
}

Outcome criterion3() {
  struct Case {
    const char* name;
    std::vector<Source> free;
    double target;
  };
  const std::vector<Case> cases{{"symmetric", {Source::Alpha, Source::Beta, Source::Gamma}, 0.9971},
                                {"alpha", {Source::Alpha}, 0.9946},
                                {"gamma", {Source::Gamma}, 0.988},
                                {"beta", {Source::Beta}, 0.9854}};
  Outcome o{true, ""};
  std::vector<double> v;
  for (const auto& c : cases) {
    ThresholdOptions opt;
    opt.lo = 0.9;
    opt.hi = 1.0;
    opt.step = 1e-4;
    const auto r = visibility_threshold(Rgb4Params{}, c.free, true, opt);
    for (const auto& probe : r.trace) {
      if (probe.status == LpStatus::Infeasible) {
        g_certificates.push_back({fmt("%s v=%.5f", c.name, probe.v), probe.certificate_verified, 0.0, 0.0});
      }
    }
    const bool ok = !r.ambiguous && std::abs(r.critical - c.target) <= 5e-4;
    o.pass = o.pass && ok;
    o.detail += fmt("%s %.5f (target %.4f)%s; ", c.name, r.critical, c.target, ok ? "" : " OUT");
    v.push_back(r.critical);
  }
  const bool order = v[3] < v[2] && v[2] < v[1];
  o.pass = o.pass && order;
  o.detail += order ? "v_beta < v_gamma < v_alpha" : "ordering violated";
  return o;
}

Outcome criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double e = 0.05 * i + 0.025, v = 0.8 + 0.05 * j;
      const double s = evaluate_S(correlators(fritz_tables({e, v})));
      worst = std::max(worst, std::abs(s - closed_form_SQ(e, v)));
    }
  }
  // Sign change of the closed form at v = 1, found by bisection on the table pipeline.
  double lo = 0.2, hi = 0.5;
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    (evaluate_S(correlators(fritz_tables({mid, 1.0}))) < 0 ? lo : hi) = mid;
  }
  const double root = 0.5 * (lo + hi);
  const double expected_root = 1.0 - std::sqrt(std::sqrt(2.0) - 1.0);
  double vmin_err = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double e = 0.02 * i;
    vmin_err = std::max(vmin_err, std::abs(v_min(e) - std::sqrt(2.0) / (1.0 + (1.0 - e) * (1.0 - e))));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Outcome o;
  o.pass = worst <= 1e-10 && std::abs(root - expected_root) <= 1e-6 && vmin_err <= 1e-10 && secs <= 5.0;
  o.detail = fmt("max |S_table - S_closed| %.2e over 50 points, root %.8f vs %.8f, v_min error %.2e, %.2f s", worst,
                 root, expected_root, vmin_err, secs);
  return o;
}

Outcome criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  testsupport::Rng rng(20240501);
  double worst = 0.0;
  int compared = 0, zero_div = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = testsupport::random_strategy(rng, testsupport::random_network(rng, trial % 4 != 0));
    for (const auto& p : s.network.parties()) {
      try {
        worst = std::max(worst, recover_do(s, p.name).max_abs_difference(pearl_do_quantum(s, p.name)));
        ++compared;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::ZeroDivisor) throw;
        ++zero_div;
      }
    }
  }
  // Triangle: do(B) is the (A, C) marginal for every forced b.
  const auto tri = rgb4_strategy({});
  const auto d = recover_do(tri, "B");
  const auto ac = quantum_behavior(tri).marginal({"A", "C"});
  double tri_diff = 0.0;
  for (std::size_t b = 0; b < 4; ++b) {
    for (std::size_t x = 0; x < d.outcome_count(); ++x) tri_diff = std::max(tri_diff, std::abs(d.at(x, b) - ac.at(x)));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Outcome o;
  o.pass = worst <= 1e-10 && tri_diff <= 1e-15 && compared > 100 && secs <= 30.0;
  o.detail = fmt("100 networks, %d do-targets compared, %d zero-divisor skips, max residual %.2e, triangle %.2e, %.2f s",
                 compared, zero_div, worst, tri_diff, secs);
  return o;
}

double instrumental_residual(const QuantumStrategy& s) {
  const auto obs_a = quantum_behavior(s).marginal({"A"});
  const auto pint = interventional_behavior(s, {{"lambda", "A", std::nullopt}});
  const auto d = pearl_do_quantum(s, "A");
  double worst = 0.0;
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) {
        const std::vector<std::size_t> ab{a, b}, xs{x}, bs{b}, as{a}, xa{x, a};
        worst = std::max(worst, std::abs(pint(ab, xs) - obs_a(as, xs) * d(bs, xa)));
      }
    }
  }
  return worst;
}

double uc_residual(const QuantumStrategy& s) {
  const auto pint = interventional_behavior(s, {{"gamma", "A", std::nullopt}});
  const auto obs_bc = quantum_behavior(s).marginal({"B", "C"});
  const auto a_do_b = pearl_do_quantum(s, "B").marginal({"A"});
  double worst = 0.0;
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      for (std::size_t c = 0; c < 2; ++c) {
        const std::vector<std::size_t> av{a}, bv{b}, bc{b, c};
        worst = std::max(worst, std::abs(pint({a, b, c}) - a_do_b(av, bv) * obs_bc(bc)));
      }
    }
  }
  return worst;
}

Outcome criterion6() {
  double inst = instrumental_residual(instrumental_strategy()), uc = uc_residual(uc_strategy());
  testsupport::Rng rng(77);
  for (int i = 0; i < 50; ++i) {
    inst = std::max(inst, instrumental_residual(testsupport::random_instrumental(rng)));
    uc = std::max(uc, uc_residual(testsupport::random_uc(rng)));
  }
  Outcome o;
  o.pass = inst <= 1e-12 && uc <= 1e-12;
  o.detail = fmt("default + 50 random each: instrumental max residual %.2e, UC max residual %.2e", inst, uc);
  return o;
}

Outcome criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o{true, ""};
  for (const double e : {0.1, 0.2, 0.3}) {
    const auto r = classical_sanity(e, 100000, 7);
    const bool ok = r.min_S && *r.min_S >= -1e-9;
    o.pass = o.pass && ok;
    o.detail += fmt("eps %.1f min S %.3e (%zu below -1e-9); ", e, r.min_S.value_or(NAN), r.counterexamples);
  }
  double worst_quantum = -1.0;
  for (int i = 1; i < 35; ++i) {
    worst_quantum = std::max(worst_quantum, evaluate_S(correlators(fritz_tables({0.01 * i, 1.0}))));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.pass = o.pass && worst_quantum < 0 && secs <= 120.0;
  o.detail += fmt("quantum max S over eps 0.01..0.34 = %.3e; %.1f s", worst_quantum, secs);
  return o;
}

Outcome criterion8() {
  Outcome o{!g_certificates.empty(), ""};
  int bad = 0;
  for (const auto& c : g_certificates) {
    if (!c.verified) {
      ++bad;
      o.pass = false;
      o.detail += " unverified: " + c.what + ";";
    }
  }
  o.detail = fmt("%zu infeasible verdicts from criteria 1-3, %d failed the independent Farkas check", g_certificates.size(),
                 bad) +
             o.detail;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},
      {5, criterion5}, {6, criterion6}, {7, criterion7}, {8, criterion8}};
  int failed = 0;
  for (const auto& [id, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] criterion %d: %s\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

#include "latentsplit/fritz.hpp"

#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "latentsplit/error.hpp"

namespace latentsplit {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// P(a=b, c) - P(a!=b, c) for a table over A, B, C; c = -1 sums over c.
double agreement(const Behavior& t, int c) {
  const std::vector<std::string> keep{"A", "B", "C"};
  const Behavior m = t.marginal(keep);
  double e = 0.0;
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      for (std::size_t cc = 0; cc < 2; ++cc) {
        if (c >= 0 && cc != static_cast<std::size_t>(c)) continue;
        e += (a == b ? 1.0 : -1.0) * m({a, b, cc});
      }
    }
  }
  return e;
}

void require_binary(const Behavior& t, const char* which) {
  if (!t.conditions().empty()) throw Error(ErrorKind::CardinalityMismatch, std::string(which) + ": unexpected inputs");
  for (const char* name : {"A", "B", "C"}) {
    const auto k = t.find_outcome(name);
    if (!k || t.outcomes()[*k].card != 2) {
      throw Error(ErrorKind::CardinalityMismatch, std::string(which) + ": party " + name + " is not binary");
    }
  }
}

void check_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorKind::ParamOutOfRange, std::string(what) + " must lie in [0,1]");
}

std::vector<double> dirichlet(std::mt19937_64& rng, std::size_t n) {
  std::gamma_distribution<double> g(1.0, 1.0);
  std::vector<double> p(n);
  double sum = 0.0;
  for (auto& x : p) sum += (x = g(rng));
  for (auto& x : p) x /= sum;
  return p;
}

std::vector<std::vector<std::array<double, 2>>> random_response(std::mt19937_64& rng, std::size_t n1, std::size_t n2,
                                                                bool deterministic) {
  std::vector<std::vector<std::array<double, 2>>> r(n1, std::vector<std::array<double, 2>>(n2));
  for (auto& row : r) {
    for (auto& cell : row) {
      if (deterministic) {
        const double bit = static_cast<double>(rng() & 1U);
        cell = {1.0 - bit, bit};
      } else {
        const auto p = dirichlet(rng, 2);
        cell = {p[0], p[1]};
      }
    }
  }
  return r;
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::string digest(const FritzClassicalModel& m) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const auto* p : {&m.p_alpha, &m.p_beta, &m.p_gamma}) h = fnv1a(h, p->data(), p->size() * sizeof(double));
  for (const auto* r : {&m.A, &m.B, &m.C}) {
    for (const auto& row : *r) h = fnv1a(h, row.data(), row.size() * sizeof(row[0]));
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

// P(a,b,c) = sum p(al) p(be) p(ga) A(a | be_A, ga) B(b | ga, al_B) C(c | al, be)
// where be_A / al_B are either the original source or an independent copy.
Behavior fritz_table(const FritzClassicalModel& m, bool split_alpha, bool split_beta) {
  const std::size_t na = m.p_alpha.size(), nb = m.p_beta.size(), ng = m.p_gamma.size();
  // Responses averaged over an independent copy of the split source.
  std::vector<std::array<double, 2>> a_avg(ng, {0.0, 0.0}), b_avg(ng, {0.0, 0.0});
  for (std::size_t g = 0; g < ng; ++g) {
    for (std::size_t be = 0; be < nb; ++be) {
      for (int o = 0; o < 2; ++o) a_avg[g][o] += m.p_beta[be] * m.A[be][g][o];
    }
    for (std::size_t al = 0; al < na; ++al) {
      for (int o = 0; o < 2; ++o) b_avg[g][o] += m.p_alpha[al] * m.B[g][al][o];
    }
  }
  std::vector<double> table(8, 0.0);
  for (std::size_t al = 0; al < na; ++al) {
    for (std::size_t be = 0; be < nb; ++be) {
      const double pab = m.p_alpha[al] * m.p_beta[be];
      for (std::size_t g = 0; g < ng; ++g) {
        const double w = pab * m.p_gamma[g];
        const auto& ra = split_beta ? a_avg[g] : m.A[be][g];
        const auto& rb = split_alpha ? b_avg[g] : m.B[g][al];
        const auto& rc = m.C[al][be];
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) {
            for (int c = 0; c < 2; ++c) table[4 * a + 2 * b + c] += w * ra[a] * rb[b] * rc[c];
          }
        }
      }
    }
  }
  return Behavior({{"A", 2}, {"B", 2}, {"C", 2}}, {}, std::move(table));
}

}  // namespace

FritzCorrelators correlators(const FritzTables& t) {
  require_binary(t.obs, "obs");
  require_binary(t.int_alpha, "int_alpha");
  require_binary(t.int_beta, "int_beta");
  require_binary(t.int_alphabeta, "int_alphabeta");
  FritzCorrelators c;
  for (int k = 0; k < 2; ++k) {
    c.E_obs[k] = agreement(t.obs, k);
    c.E_beta[k] = agreement(t.int_beta, k);
    c.E_alpha[k] = agreement(t.int_alpha, k);
  }
  c.E_alphabeta = agreement(t.int_alphabeta, -1);
  c.P_obs_c1 = t.obs.probability({{"C", {1}}});
  return c;
}

double evaluate_S(const FritzCorrelators& c) {
  return (c.E_alphabeta + 2.0) * c.P_obs_c1 - c.E_obs[1] - c.E_alpha[1] - c.E_beta[1];
}

double closed_form_SQ(double epsilon, double visibility) {
  check_unit(epsilon, "epsilon");
  check_unit(visibility, "visibility");
  const double e2 = epsilon * epsilon;
  return 2.0 * e2 + visibility * (4.0 * kInvSqrt2 * (epsilon - 1.0) * e2 - 2.0 * kInvSqrt2 * e2 * e2);
}

double v_min(double epsilon) {
  check_unit(epsilon, "epsilon");
  const double d = 1.0 - epsilon;
  return std::sqrt(2.0) / (1.0 + d * d);
}

double epsilon_threshold(double visibility) {
  check_unit(visibility, "visibility");
  const double r = std::sqrt(2.0) / visibility - 1.0;
  if (!(r <= 1.0)) throw Error(ErrorKind::ParamOutOfRange, "visibility too low for any violation");
  return 1.0 - std::sqrt(r);
}

FritzTables classical_fritz_tables(const FritzClassicalModel& m) {
  const std::size_t na = m.p_alpha.size(), nb = m.p_beta.size(), ng = m.p_gamma.size();
  auto shape_ok = [](const auto& r, std::size_t n1, std::size_t n2) {
    if (r.size() != n1) return false;
    for (const auto& row : r) {
      if (row.size() != n2) return false;
    }
    return true;
  };
  if (!shape_ok(m.A, nb, ng) || !shape_ok(m.B, ng, na) || !shape_ok(m.C, na, nb)) {
    throw Error(ErrorKind::ModelMismatch, "response tables do not match the source alphabets");
  }
  return {fritz_table(m, false, false), fritz_table(m, true, false), fritz_table(m, false, true),
          fritz_table(m, true, true)};
}

nlohmann::json SanityReport::to_json() const {
  nlohmann::json j{{"epsilon", epsilon}, {"samples", samples}, {"seed", seed}, {"counterexamples", counterexamples}};
  j["min_S"] = min_S ? nlohmann::json(*min_S) : nlohmann::json(nullptr);
  j["argmin_model_digest"] = argmin_model_digest.empty() ? nlohmann::json(nullptr) : nlohmann::json(argmin_model_digest);
  return j;
}

SanityReport classical_sanity(double epsilon, std::size_t samples, std::uint64_t seed) {
  check_unit(epsilon, "epsilon");
  SanityReport report;
  report.epsilon = epsilon;
  report.samples = samples;
  report.seed = seed;

  std::mt19937_64 rng(seed);
  // Outcome value v = 2*bit + aux; the bit has bias epsilon, aux is fair.
  const std::vector<double> biased{(1.0 - epsilon) / 2, (1.0 - epsilon) / 2, epsilon / 2, epsilon / 2};
  for (std::size_t i = 0; i < samples; ++i) {
    FritzClassicalModel m;
    m.p_alpha = biased;
    m.p_beta = biased;
    m.p_gamma = dirichlet(rng, 4);
    // Odd samples use deterministic responses, where the classical extremes live.
    const bool vertex = (i % 2) == 1;
    m.A = random_response(rng, 4, 4, vertex);
    m.B = random_response(rng, 4, 4, vertex);
    m.C = random_response(rng, 4, 4, vertex);
    const double s = evaluate_S(correlators(classical_fritz_tables(m)));
    if (s < -1e-9) ++report.counterexamples;
    if (!report.min_S || s < *report.min_S) {
      report.min_S = s;
      report.argmin_model_digest = digest(m);
    }
  }
  return report;
}

}  // namespace latentsplit

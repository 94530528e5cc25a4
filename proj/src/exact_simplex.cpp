// Dense-tableau phase-1 simplex over exact rationals with Bland's rule.
// Intended for small programs; the tableau has m x (n + m + 1) entries.

#include <gmpxx.h>

#include "latentsplit/error.hpp"
#include "latentsplit/lp.hpp"

namespace latentsplit::detail {

FeasibilityVerdict solve_rational(const LinearProgram& lp, const SolverOptions& opt) {
  const std::size_t m = lp.num_rows();
  const std::size_t n = lp.num_columns;
  const std::size_t width = n + m + 1;  // structural | artificial | rhs
  if (m * width > 50'000'000) {
    throw Error(ErrorKind::PreconditionViolated, "program too large for the exact tableau");
  }

  std::vector<mpq_class> t(m * width);
  auto at = [&](std::size_t i, std::size_t j) -> mpq_class& { return t[i * width + j]; };
  std::vector<int> sign(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    if (row.rhs < 0.0) sign[i] = -1;
    for (const auto& [j, c] : row.coeffs) at(i, j) = mpq_class(c) * sign[i];
    at(i, n + i) = 1;
    at(i, n + m) = mpq_class(row.rhs) * sign[i];
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  // Reduced costs of the phase-1 objective: d_j = c_j - sum over artificial rows.
  std::vector<mpq_class> d(n + m);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) d[j] -= at(i, j);
  }

  std::size_t iter = 0;
  for (;; ++iter) {
    if (iter >= opt.max_iterations) throw Error(ErrorKind::NumericallyAmbiguous, "exact simplex iteration limit");
    std::size_t q = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(d[j]) < 0) {
        q = j;
        break;
      }
    }
    if (q == n) break;

    std::size_t r = m;
    mpq_class best;
    for (std::size_t i = 0; i < m; ++i) {
      if (sgn(at(i, q)) <= 0) continue;
      mpq_class ratio = at(i, n + m) / at(i, q);
      if (r == m || ratio < best || (ratio == best && basis[i] < basis[r])) {
        best = ratio;
        r = i;
      }
    }
    if (r == m) throw Error(ErrorKind::NumericallyAmbiguous, "exact simplex found no pivot row");

    const mpq_class piv = at(r, q);
    for (std::size_t j = 0; j < width; ++j) at(r, j) /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || sgn(at(i, q)) == 0) continue;
      const mpq_class f = at(i, q);
      for (std::size_t j = 0; j < width; ++j) {
        if (sgn(at(r, j)) != 0) at(i, j) -= f * at(r, j);
      }
    }
    const mpq_class fd = d[q];
    for (std::size_t j = 0; j < n + m; ++j) {
      if (sgn(at(r, j)) != 0) d[j] -= fd * at(r, j);
    }
    basis[r] = q;
  }

  FeasibilityVerdict verdict;
  verdict.exact = true;
  verdict.iterations = iter;
  mpq_class objective;
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] >= n) objective += at(i, n + m);
  }
  verdict.phase1_objective = objective.get_d();
  if (sgn(objective) == 0) {
    verdict.status = LpStatus::Feasible;
    verdict.point.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < n) verdict.point[basis[i]] = at(i, n + m).get_d();
    }
    return verdict;
  }
  // The artificial block of the tableau holds B^-1, so pi_k = sum over artificial basic rows.
  verdict.status = LpStatus::Infeasible;
  verdict.certificate.assign(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    mpq_class pi;
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] >= n) pi += at(i, n + k);
    }
    verdict.certificate[k] = -pi.get_d() * sign[k];
  }
  return verdict;
}

}  // namespace latentsplit::detail

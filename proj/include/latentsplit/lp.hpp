#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "latentsplit/behavior.hpp"
#include "latentsplit/knowns.hpp"

namespace latentsplit {

/// Equality row  sum_j coef_j x_j = rhs. For inflation rows the rhs is the
/// product of the atoms' probabilities (an empty atom list means 1).
struct LpRow {
  std::string name;
  std::vector<std::pair<std::size_t, double>> coeffs;  ///< sorted by column
  double rhs = 0.0;
  std::vector<EventAtom> atoms;
};

/// Feasibility problem {x >= 0 : A x = b}. When built with symmetry each
/// column stands for an orbit of joint outcome tuples.
struct LinearProgram {
  std::vector<Variable> variables;  ///< inflated observed nodes
  std::size_t num_columns = 0;
  std::vector<LpRow> rows;
  /// Outcome-tuple indices merged into each column; empty when columns are the tuples themselves.
  std::vector<std::vector<std::size_t>> column_members;

  std::size_t num_rows() const { return rows.size(); }
  std::size_t nonzeros() const;

  /// Plain-text form: "VARS n" then one "E <name> : <c>*x<j> + ... = <rhs>" per row.
  void write_text(std::ostream& out) const;
  /// Reads the plain-text form (atoms are not stored in it). Throws ParseError.
  static LinearProgram read_text(std::istream& in);

  /// Column values -> distribution over all outcome tuples (orbit weight spread evenly).
  std::vector<double> expand_point(const std::vector<double>& columns) const;
};

enum class Arithmetic { Double, Rational };

struct SolverOptions {
  double feasibility_tol = 1e-9;
  double certificate_tol = 1e-8;
  Arithmetic arithmetic = Arithmetic::Double;
  std::size_t refactor_interval = 1000;
  std::size_t max_iterations = 500000;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  std::size_t degenerate_switch = 50;
};

enum class LpStatus { Feasible, Infeasible };

struct FeasibilityVerdict {
  LpStatus status = LpStatus::Feasible;
  std::vector<double> point;        ///< per column, when Feasible
  std::vector<double> certificate;  ///< per row, when Infeasible
  double residual = 0.0;            ///< max |A x - b| of the point
  double phase1_objective = 0.0;
  std::size_t iterations = 0;
  bool exact = false;

  bool feasible() const { return status == LpStatus::Feasible; }
};

struct CertificateCheck {
  double min_reduced = 0.0;   ///< min_j (A^T y)_j
  double dual_objective = 0.0;  ///< b^T y
  bool valid = false;
};

/// Independent Farkas check: A^T y >= -tol componentwise and b^T y <= -tol.
CertificateCheck verify_certificate(const LinearProgram& lp, const std::vector<double>& y, double tol = 1e-8);
double max_residual(const LinearProgram& lp, const std::vector<double>& x);

/// Phase-1 simplex. Throws NumericallyAmbiguous when neither a feasible point
/// within feasibility_tol nor a certificate verified at certificate_tol is found.
FeasibilityVerdict solve_feasibility(const LinearProgram& lp, const SolverOptions& options = {});

namespace detail {
FeasibilityVerdict solve_double(const LinearProgram& lp, const SolverOptions& options);
FeasibilityVerdict solve_rational(const LinearProgram& lp, const SolverOptions& options);
}  // namespace detail

}  // namespace latentsplit

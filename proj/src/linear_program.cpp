#include "latentsplit/lp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "latentsplit/error.hpp"

namespace latentsplit {

std::size_t LinearProgram::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.coeffs.size();
  return n;
}

void LinearProgram::write_text(std::ostream& out) const {
  const auto old = out.precision();
  out << std::setprecision(17);
  out << "VARS " << num_columns << '\n';
  for (const auto& r : rows) {
    out << "E " << r.name << " :";
    bool first = true;
    for (const auto& [j, c] : r.coeffs) {
      out << (first ? " " : " + ") << c << "*x" << j;
      first = false;
    }
    if (first) out << " 0";
    out << " = " << r.rhs << '\n';
  }
  out.precision(old);
}

LinearProgram LinearProgram::read_text(std::istream& in) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::ParseError, "LP text: " + what); };
  LinearProgram lp;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "VARS") {
      if (!(ls >> lp.num_columns)) fail("bad VARS line");
      have_header = true;
      continue;
    }
    if (tag != "E" || !have_header) fail("expected VARS header before rows: " + line);
    LpRow row;
    const auto colon = line.find(" : ");
    const auto eq = line.rfind(" = ");
    if (colon == std::string::npos || eq == std::string::npos || eq < colon) fail("malformed row: " + line);
    row.name = line.substr(2, colon - 2);
    std::istringstream rhs(line.substr(eq + 3));
    if (!(rhs >> row.rhs)) fail("bad right-hand side: " + line);
    std::istringstream terms(line.substr(colon + 3, eq - colon - 3));
    std::string term;
    while (terms >> term) {
      if (term == "+") continue;
      if (term == "0") continue;
      const auto star = term.find("*x");
      if (star == std::string::npos) fail("bad term " + term);
      try {
        const double c = std::stod(term.substr(0, star));
        const auto j = static_cast<std::size_t>(std::stoull(term.substr(star + 2)));
        if (j >= lp.num_columns) fail("column out of range in " + term);
        row.coeffs.emplace_back(j, c);
      } catch (const std::logic_error&) {
        fail("bad term " + term);
      }
    }
    std::sort(row.coeffs.begin(), row.coeffs.end());
    lp.rows.push_back(std::move(row));
  }
  if (!have_header) fail("missing VARS header");
  return lp;
}

std::vector<double> LinearProgram::expand_point(const std::vector<double>& columns) const {
  if (column_members.empty()) return columns;
  std::size_t total = 0;
  for (const auto& m : column_members) total += m.size();
  std::vector<double> out(total, 0.0);
  for (std::size_t j = 0; j < column_members.size(); ++j) {
    const double share = columns[j] / static_cast<double>(column_members[j].size());
    for (auto x : column_members[j]) out[x] = share;
  }
  return out;
}

CertificateCheck verify_certificate(const LinearProgram& lp, const std::vector<double>& y, double tol) {
  if (y.size() != lp.num_rows()) throw Error(ErrorKind::PreconditionViolated, "certificate length differs from row count");
  std::vector<long double> aty(lp.num_columns, 0.0L);
  long double bty = 0.0L;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    if (y[i] == 0.0) continue;
    for (const auto& [j, c] : lp.rows[i].coeffs) aty[j] += static_cast<long double>(c) * y[i];
    bty += static_cast<long double>(lp.rows[i].rhs) * y[i];
  }
  CertificateCheck check;
  check.min_reduced = aty.empty() ? 0.0 : static_cast<double>(*std::min_element(aty.begin(), aty.end()));
  check.dual_objective = static_cast<double>(bty);
  check.valid = check.min_reduced >= -tol && check.dual_objective <= -tol;
  return check;
}

double max_residual(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (const auto& r : lp.rows) {
    long double s = 0.0L;
    for (const auto& [j, c] : r.coeffs) s += static_cast<long double>(c) * x[j];
    worst = std::max(worst, static_cast<double>(std::fabs(s - r.rhs)));
  }
  return worst;
}

FeasibilityVerdict solve_feasibility(const LinearProgram& lp, const SolverOptions& options) {
  if (!(options.feasibility_tol > 0.0) || !(options.certificate_tol > 0.0)) {
    throw Error(ErrorKind::ParamOutOfRange, "solver tolerances must be positive");
  }
  FeasibilityVerdict v = options.arithmetic == Arithmetic::Rational ? detail::solve_rational(lp, options)
                                                                     : detail::solve_double(lp, options);
  std::ostringstream why;
  if (v.status == LpStatus::Feasible) {
    v.residual = max_residual(lp, v.point);
    const double most_negative = v.point.empty() ? 0.0 : *std::min_element(v.point.begin(), v.point.end());
    if (v.residual <= options.feasibility_tol && most_negative >= -options.feasibility_tol) {
      for (auto& x : v.point) x = std::max(x, 0.0);
      return v;
    }
    why << "point residual " << v.residual << ", min entry " << most_negative;
  } else {
    double scale = 0.0;
    for (double y : v.certificate) scale = std::max(scale, std::fabs(y));
    if (scale > 0.0) {
      for (double& y : v.certificate) y /= scale;
    }
    const auto check = verify_certificate(lp, v.certificate, options.certificate_tol);
    if (check.valid) return v;
    why << "certificate min(A^T y) = " << check.min_reduced << ", b^T y = " << check.dual_objective
        << ", phase-1 objective " << v.phase1_objective;
  }
  throw Error(ErrorKind::NumericallyAmbiguous, why.str());
}

}  // namespace latentsplit

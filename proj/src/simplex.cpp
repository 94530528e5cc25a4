// Revised primal simplex on the phase-1 problem
//   min sum(s)  s.t.  A x + s = b,  x, s >= 0   (rows negated so b >= 0)
// with an explicit dense basis inverse. Artificials that leave the basis are
// never priced again.
//
// The inflation programs are massively degenerate (many zero right-hand
// sides), so the main pass runs on a slightly perturbed b; the true b is then
// restored and the final basis cleaned up, or the solve restarted cold.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "latentsplit/error.hpp"
#include "latentsplit/lp.hpp"

namespace latentsplit::detail {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);
constexpr double kPricingTol = 1e-10;
constexpr double kPivotTol = 1e-9;
constexpr double kHarrisDelta = 1e-11;
constexpr double kDegenerateStep = 1e-12;
constexpr double kPerturbation = 1e-7;

[[noreturn]] void ambiguous(const std::string& what) { throw Error(ErrorKind::NumericallyAmbiguous, what); }

class PhaseOne {
 public:
  PhaseOne(const LinearProgram& lp, const SolverOptions& opt) : opt_(opt), m_(lp.num_rows()), n_(lp.num_columns) {
    M_ = static_cast<Eigen::Index>(m_);
    sign_.assign(m_, 1.0);
    b_true_.resize(M_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (lp.rows[i].rhs < 0.0) sign_[i] = -1.0;
      b_true_(idx(i)) = sign_[i] * lp.rows[i].rhs;
    }
    start_.assign(n_ + 1, 0);
    for (const auto& r : lp.rows) {
      for (const auto& [j, c] : r.coeffs) ++start_[j + 1];
    }
    for (std::size_t j = 0; j < n_; ++j) start_[j + 1] += start_[j];
    row_.resize(start_[n_]);
    val_.resize(start_[n_]);
    auto fill = start_;
    for (std::size_t i = 0; i < m_; ++i) {
      for (const auto& [j, c] : lp.rows[i].coeffs) {
        row_[fill[j]] = idx(i);
        val_[fill[j]] = sign_[i] * c;
        ++fill[j];
      }
    }
    alpha_.resize(M_);
  }

  std::size_t rows() const { return m_; }
  const std::vector<double>& signs() const { return sign_; }
  std::size_t iterations() const { return total_iterations_; }

  void cold_start(const Eigen::VectorXd& b) {
    b_ = b;
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) basis_[i] = n_ + i;
    is_basic_.assign(n_, 0);
    binv_ = Eigen::MatrixXd::Identity(M_, M_);
    xb_ = b_;
    pi_ = Eigen::VectorXd::Ones(M_);
    weight_.assign(n_, 1.0);
  }

  /// Swaps in a new right-hand side keeping the basis; returns min x_B.
  double change_rhs(const Eigen::VectorXd& b) {
    b_ = b;
    refactor();
    return xb_.minCoeff();
  }

  const Eigen::VectorXd& perturbed(unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    b_pert_ = b_true_;
    for (Eigen::Index i = 0; i < M_; ++i) b_pert_(i) += kPerturbation * (1.0 + unit(rng));
    return b_pert_;
  }
  const Eigen::VectorXd& true_rhs() const { return b_true_; }

  void run() {
    std::size_t degenerate_run = 0;
    std::size_t since_refactor = 0;
    bool bland = false;
    bool fresh = false;
    refactor();
    fresh = true;
    for (;;) {
      if (total_iterations_ >= opt_.max_iterations) ambiguous("simplex iteration limit reached");

      // Devex pricing; Bland takes the first improving column instead.
      std::size_t q = kNone;
      double dq = 0.0, score = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        if (is_basic_[j]) continue;
        double d = 0.0;
        for (std::size_t k = start_[j]; k < start_[j + 1]; ++k) d -= pi_(row_[k]) * val_[k];
        if (d >= -kPricingTol) continue;
        if (bland) {
          q = j;
          dq = d;
          break;
        }
        const double s = d * d / weight_[j];
        if (s > score) {
          q = j;
          dq = d;
          score = s;
        }
      }
      if (q == kNone) {
        if (fresh) return;
        refactor();  // confirm optimality against freshly computed duals
        since_refactor = 0;
        fresh = true;
        continue;
      }

      alpha_.setZero();
      for (std::size_t k = start_[q]; k < start_[q + 1]; ++k) alpha_.noalias() += val_[k] * binv_.col(row_[k]);

      const std::size_t r = bland ? bland_row() : harris_row();
      if (r == kNone) {
        // Phase 1 is bounded below, so this only happens through round-off.
        if (fresh) ambiguous("no pivot row found for an improving column");
        refactor();
        since_refactor = 0;
        fresh = true;
        continue;
      }
      fresh = false;
      ++total_iterations_;

      const auto R = idx(r);
      const double theta = std::max(xb_(R), 0.0) / alpha_(R);
      xb_.noalias() -= theta * alpha_;
      xb_(R) = theta;
      clamp();

      const Eigen::RowVectorXd pivot_row = binv_.row(R) / alpha_(R);
      update_weights(q, r, pivot_row);
      alpha_(R) -= 1.0;
      binv_.noalias() -= alpha_ * pivot_row;
      pi_.noalias() += dq * pivot_row.transpose();

      if (basis_[r] < n_) is_basic_[basis_[r]] = 0;
      basis_[r] = q;
      is_basic_[q] = 1;

      if (theta <= kDegenerateStep) {
        if (++degenerate_run >= opt_.degenerate_switch) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }

      ++since_refactor;
      if (since_refactor >= opt_.refactor_interval || (since_refactor % 100 == 0 && basis_residual() > 1e-9)) {
        refactor();
        since_refactor = 0;
      }
    }
  }

  double objective() const {
    double w = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= n_) w += xb_(idx(i));
    }
    return w;
  }

  std::vector<double> point() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = xb_(idx(i));
    }
    return x;
  }

  /// Farkas vector in the orientation of the original rows.
  std::vector<double> certificate() const {
    std::vector<double> y(m_);
    for (std::size_t i = 0; i < m_; ++i) y[i] = -pi_(idx(i)) * sign_[i];
    return y;
  }

 private:
  static Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

  void update_weights(std::size_t q, std::size_t r, const Eigen::RowVectorXd& pivot_row) {
    const double wq = weight_[q];
    for (std::size_t j = 0; j < n_; ++j) {
      if (is_basic_[j] || j == q) continue;
      double a = 0.0;
      for (std::size_t k = start_[j]; k < start_[j + 1]; ++k) a += pivot_row(row_[k]) * val_[k];
      if (a != 0.0) weight_[j] = std::max(weight_[j], a * a * wq);
    }
    const double ar = alpha_(idx(r));
    if (basis_[r] < n_) weight_[basis_[r]] = std::max(wq / (ar * ar), 1.0);
  }

  void clamp() {
    for (Eigen::Index i = 0; i < M_; ++i) {
      if (xb_(i) < 0.0 && xb_(i) > -kHarrisDelta) xb_(i) = 0.0;
    }
  }

  void refactor() {
    Eigen::MatrixXd basis_matrix = Eigen::MatrixXd::Zero(M_, M_);
    Eigen::VectorXd cb = Eigen::VectorXd::Zero(M_);
    for (std::size_t i = 0; i < m_; ++i) {
      const auto col = idx(i);
      if (basis_[i] >= n_) {
        basis_matrix(idx(basis_[i] - n_), col) = 1.0;
        cb(col) = 1.0;
      } else {
        for (std::size_t k = start_[basis_[i]]; k < start_[basis_[i] + 1]; ++k) basis_matrix(row_[k], col) = val_[k];
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    if (!(lu.rcond() > 1e-14)) ambiguous("basis matrix became numerically singular");
    binv_ = lu.inverse();
    xb_ = binv_ * b_;
    clamp();
    pi_ = binv_.transpose() * cb;
  }

  double basis_residual() const {
    Eigen::VectorXd r = b_;
    for (std::size_t i = 0; i < m_; ++i) {
      const double x = xb_(idx(i));
      if (basis_[i] >= n_) {
        r(idx(basis_[i] - n_)) -= x;
      } else {
        for (std::size_t k = start_[basis_[i]]; k < start_[basis_[i] + 1]; ++k) r(row_[k]) -= val_[k] * x;
      }
    }
    return r.cwiseAbs().maxCoeff();
  }

  // Two-pass Harris test; prefers an artificial among acceptable pivots.
  std::size_t harris_row() const {
    double bound = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < M_; ++i) {
      if (alpha_(i) > kPivotTol) bound = std::min(bound, (std::max(xb_(i), 0.0) + kHarrisDelta) / alpha_(i));
    }
    double best = 0.0, best_artificial = 0.0;
    std::size_t r_any = kNone, r_art = kNone;
    for (Eigen::Index i = 0; i < M_; ++i) {
      if (alpha_(i) <= kPivotTol || std::max(xb_(i), 0.0) / alpha_(i) > bound) continue;
      const auto ui = static_cast<std::size_t>(i);
      if (alpha_(i) > best) {
        best = alpha_(i);
        r_any = ui;
      }
      if (basis_[ui] >= n_ && alpha_(i) > best_artificial) {
        best_artificial = alpha_(i);
        r_art = ui;
      }
    }
    return (r_art != kNone && best_artificial >= 1e-3 * best) ? r_art : r_any;
  }

  // Minimum ratio; ties go to the lowest-indexed basic variable.
  std::size_t bland_row() const {
    double ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < M_; ++i) {
      if (alpha_(i) > kPivotTol) ratio = std::min(ratio, std::max(xb_(i), 0.0) / alpha_(i));
    }
    std::size_t r = kNone;
    for (Eigen::Index i = 0; i < M_; ++i) {
      if (alpha_(i) <= kPivotTol || std::max(xb_(i), 0.0) / alpha_(i) > ratio + 1e-15) continue;
      const auto ui = static_cast<std::size_t>(i);
      if (r == kNone || basis_[ui] < basis_[r]) r = ui;
    }
    return r;
  }

  const SolverOptions& opt_;
  std::size_t m_, n_;
  Eigen::Index M_ = 0;
  std::vector<double> sign_;
  Eigen::VectorXd b_true_, b_pert_, b_;
  std::vector<std::size_t> start_;
  std::vector<Eigen::Index> row_;
  std::vector<double> val_;

  std::vector<std::size_t> basis_;
  std::vector<char> is_basic_;
  std::vector<double> weight_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_, pi_, alpha_;
  std::size_t total_iterations_ = 0;
};

}  // namespace

FeasibilityVerdict solve_double(const LinearProgram& lp, const SolverOptions& opt) {
  FeasibilityVerdict verdict;
  if (lp.num_rows() == 0) {
    verdict.point.assign(lp.num_columns, 0.0);
    return verdict;
  }
  PhaseOne solver(lp, opt);
  solver.cold_start(solver.perturbed(0x5eed));
  solver.run();
  // Reduced costs do not depend on b: the final basis stays optimal for the
  // true b whenever it is still primal feasible there.
  if (solver.change_rhs(solver.true_rhs()) >= -kHarrisDelta) {
    solver.run();
  } else {
    solver.cold_start(solver.true_rhs());
    solver.run();
  }

  verdict.iterations = solver.iterations();
  verdict.phase1_objective = solver.objective();
  if (verdict.phase1_objective <= opt.feasibility_tol) {
    verdict.status = LpStatus::Feasible;
    verdict.point = solver.point();
  } else {
    verdict.status = LpStatus::Infeasible;
    verdict.certificate = solver.certificate();
  }
  return verdict;
}

}  // namespace latentsplit::detail

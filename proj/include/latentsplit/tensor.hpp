#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "latentsplit/behavior.hpp"

namespace latentsplit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPositivityTol = 1e-10;
inline constexpr double kCompletenessTol = 1e-10;

struct Slot {
  std::string label;
  std::size_t dim = 1;

  bool operator==(const Slot&) const = default;
};

/// Ordered, uniquely labelled tensor factors of a Hilbert space.
class SubsystemLayout {
 public:
  SubsystemLayout() = default;
  explicit SubsystemLayout(std::vector<Slot> slots);

  const std::vector<Slot>& slots() const { return slots_; }
  std::size_t size() const { return slots_.size(); }
  std::size_t total_dim() const;
  std::vector<std::string> labels() const;

  std::optional<std::size_t> find(std::string_view label) const;
  /// Throws UnknownLabel.
  std::size_t index_of(std::string_view label) const;
  bool contains(std::string_view label) const { return find(label).has_value(); }

  SubsystemLayout concat(const SubsystemLayout& other) const;
  SubsystemLayout relabeled(std::string_view from, std::string to) const;

  bool operator==(const SubsystemLayout&) const = default;

 private:
  std::vector<Slot> slots_;
};

bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);
double min_eigenvalue(const ComplexMatrix& m);

/// Normalized Hermitian operator on a labelled multipartite space.
class DensityOperator {
 public:
  DensityOperator(SubsystemLayout layout, ComplexMatrix matrix, bool check_positivity = false);

  static DensityOperator pure(SubsystemLayout layout, const ComplexVector& psi);
  static DensityOperator maximally_mixed(SubsystemLayout layout);
  /// Diagonal (classical) state with the given probabilities on the computational basis.
  static DensityOperator diagonal(SubsystemLayout layout, std::span<const double> probabilities);

  const SubsystemLayout& layout() const { return layout_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

  /// Throws InvalidOperator when the minimum eigenvalue is below -tol.
  void validate_positive(double tol = kPositivityTol) const;

 private:
  SubsystemLayout layout_;
  ComplexMatrix matrix_;
};

/// Positive operator-valued measure, optionally with one element list per input value.
class Povm {
 public:
  /// elements[input][outcome]
  Povm(SubsystemLayout layout, std::vector<std::vector<ComplexMatrix>> elements);

  /// Single-input projective measurement onto the given orthonormal vectors.
  static Povm projective(SubsystemLayout layout, const std::vector<ComplexVector>& basis);
  /// Trivial measurement on an empty layout: scalar elements p(outcome | input).
  static Povm scalar(std::vector<std::vector<double>> probabilities);

  const SubsystemLayout& layout() const { return layout_; }
  std::size_t dim() const { return layout_.total_dim(); }
  std::size_t num_inputs() const { return elements_.size(); }
  std::size_t num_outcomes() const { return elements_.front().size(); }
  const ComplexMatrix& element(std::size_t outcome, std::size_t input = 0) const;

  Povm relabeled(std::string_view from, std::string to) const;

 private:
  SubsystemLayout layout_;
  std::vector<std::vector<ComplexMatrix>> elements_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

/// Traces out the listed slots; remaining slots keep their relative order.
DensityOperator partial_trace(const DensityOperator& op, const std::vector<std::string>& over);

/// Reorders the slots of an operator to the given label order (a permutation).
DensityOperator permute_slots(const DensityOperator& op, const std::vector<std::string>& order);
ComplexMatrix permute_slots(const ComplexMatrix& m, const SubsystemLayout& layout,
                            const std::vector<std::string>& order);

/// Tr(state * (f_1 ⊗ ... ⊗ f_k)); factor dimensions must multiply to the state dimension.
Complex trace_with_product(const ComplexMatrix& state, std::span<const ComplexMatrix* const> factors);

/// Probabilities with |p| below this are written as exact zeros.
inline constexpr double kProbabilityFloor = 1e-14;
/// Returns the probability with floor clamping; throws InvalidOperator below -1e-12.
double clean_probability(double p);

struct PartyMeasurement {
  std::string party;
  Povm povm;  ///< acts on the state slots named by its layout labels
};

/// Born-rule joint distribution of single-input measurements on a state.
/// Every state slot must be covered by exactly one party's POVM layout.
Behavior born_rule(const DensityOperator& state, const std::vector<PartyMeasurement>& parties);

}  // namespace latentsplit

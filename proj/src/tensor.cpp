#include "latentsplit/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "latentsplit/error.hpp"

namespace latentsplit {

namespace {

std::vector<std::size_t> dims_of(const SubsystemLayout& layout) {
  std::vector<std::size_t> dims;
  for (const auto& s : layout.slots()) dims.push_back(s.dim);
  return dims;
}

// Digit decomposition of a flat index in row-major order (first slot most significant).
void digits_of(std::size_t index, const std::vector<std::size_t>& dims, std::vector<std::size_t>& out) {
  out.resize(dims.size());
  for (std::size_t i = dims.size(); i-- > 0;) {
    out[i] = index % dims[i];
    index /= dims[i];
  }
}

}  // namespace

SubsystemLayout::SubsystemLayout(std::vector<Slot> slots) : slots_(std::move(slots)) {
  std::set<std::string> seen;
  for (const auto& s : slots_) {
    if (s.dim < 1) throw Error(ErrorKind::LayoutMismatch, "slot " + s.label + " has dimension 0");
    if (!seen.insert(s.label).second) {
      throw Error(ErrorKind::LayoutMismatch, "duplicate slot label " + s.label);
    }
  }
}

std::size_t SubsystemLayout::total_dim() const {
  std::size_t d = 1;
  for (const auto& s : slots_) d *= s.dim;
  return d;
}

std::vector<std::string> SubsystemLayout::labels() const {
  std::vector<std::string> out;
  for (const auto& s : slots_) out.push_back(s.label);
  return out;
}

std::optional<std::size_t> SubsystemLayout::find(std::string_view label) const {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].label == label) return i;
  }
  return std::nullopt;
}

std::size_t SubsystemLayout::index_of(std::string_view label) const {
  auto i = find(label);
  if (!i) throw Error(ErrorKind::UnknownLabel, "no slot labelled " + std::string(label));
  return *i;
}

SubsystemLayout SubsystemLayout::concat(const SubsystemLayout& other) const {
  auto all = slots_;
  all.insert(all.end(), other.slots_.begin(), other.slots_.end());
  return SubsystemLayout(std::move(all));
}

SubsystemLayout SubsystemLayout::relabeled(std::string_view from, std::string to) const {
  auto all = slots_;
  all[index_of(from)].label = std::move(to);
  return SubsystemLayout(std::move(all));
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double min_eigenvalue(const ComplexMatrix& m) {
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

DensityOperator::DensityOperator(SubsystemLayout layout, ComplexMatrix matrix, bool check_positivity)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  const auto d = static_cast<Eigen::Index>(layout_.total_dim());
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw Error(ErrorKind::LayoutMismatch, "density matrix size does not match its layout");
  }
  if (!is_hermitian(matrix_)) throw Error(ErrorKind::InvalidOperator, "density matrix is not Hermitian");
  if (std::abs(matrix_.trace() - Complex(1.0)) > kTraceTol) {
    throw Error(ErrorKind::InvalidOperator, "density matrix trace differs from 1");
  }
  if (check_positivity) validate_positive();
}

DensityOperator DensityOperator::pure(SubsystemLayout layout, const ComplexVector& psi) {
  const ComplexVector n = psi / psi.norm();
  return DensityOperator(std::move(layout), n * n.adjoint());
}

DensityOperator DensityOperator::maximally_mixed(SubsystemLayout layout) {
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  return DensityOperator(std::move(layout), ComplexMatrix::Identity(d, d) / static_cast<double>(d));
}

DensityOperator DensityOperator::diagonal(SubsystemLayout layout, std::span<const double> probabilities) {
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  if (static_cast<Eigen::Index>(probabilities.size()) != d) {
    throw Error(ErrorKind::LayoutMismatch, "diagonal state needs one probability per basis vector");
  }
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) m(i, i) = probabilities[static_cast<std::size_t>(i)];
  return DensityOperator(std::move(layout), std::move(m), true);
}

void DensityOperator::validate_positive(double tol) const {
  const double lo = min_eigenvalue(matrix_);
  if (lo < -tol) {
    std::ostringstream msg;
    msg << "density matrix has eigenvalue " << lo;
    throw Error(ErrorKind::InvalidOperator, msg.str());
  }
}

Povm::Povm(SubsystemLayout layout, std::vector<std::vector<ComplexMatrix>> elements)
    : layout_(std::move(layout)), elements_(std::move(elements)) {
  if (elements_.empty() || elements_.front().empty()) {
    throw Error(ErrorKind::InvalidOperator, "POVM needs at least one input and one outcome");
  }
  const auto d = static_cast<Eigen::Index>(layout_.total_dim());
  const std::size_t outcomes = elements_.front().size();
  for (const auto& list : elements_) {
    if (list.size() != outcomes) {
      throw Error(ErrorKind::InvalidOperator, "every POVM input needs the same number of outcomes");
    }
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (const auto& e : list) {
      if (e.rows() != d || e.cols() != d) {
        throw Error(ErrorKind::LayoutMismatch, "POVM element size does not match its layout");
      }
      if (!is_hermitian(e)) throw Error(ErrorKind::InvalidOperator, "POVM element is not Hermitian");
      if (min_eigenvalue(e) < -kPositivityTol) {
        throw Error(ErrorKind::InvalidOperator, "POVM element is not positive");
      }
      sum += e;
    }
    if ((sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > kCompletenessTol) {
      throw Error(ErrorKind::InvalidOperator, "POVM elements do not sum to the identity");
    }
  }
}

Povm Povm::projective(SubsystemLayout layout, const std::vector<ComplexVector>& basis) {
  std::vector<ComplexMatrix> elements;
  for (const auto& v : basis) elements.push_back(v * v.adjoint());
  return Povm(std::move(layout), {std::move(elements)});
}

Povm Povm::scalar(std::vector<std::vector<double>> probabilities) {
  std::vector<std::vector<ComplexMatrix>> elements;
  for (const auto& row : probabilities) {
    std::vector<ComplexMatrix> list;
    for (double p : row) list.push_back(ComplexMatrix::Constant(1, 1, Complex(p)));
    elements.push_back(std::move(list));
  }
  return Povm(SubsystemLayout{}, std::move(elements));
}

const ComplexMatrix& Povm::element(std::size_t outcome, std::size_t input) const {
  if (input >= elements_.size() || outcome >= elements_[input].size()) {
    throw Error(ErrorKind::CardinalityMismatch, "POVM element index out of range");
  }
  return elements_[input][outcome];
}

Povm Povm::relabeled(std::string_view from, std::string to) const {
  Povm copy = *this;
  copy.layout_ = layout_.relabeled(from, std::move(to));
  return copy;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(a.layout().concat(b.layout()), kron(a.matrix(), b.matrix()));
}

DensityOperator partial_trace(const DensityOperator& op, const std::vector<std::string>& over) {
  const auto& layout = op.layout();
  std::vector<char> traced(layout.size(), 0);
  for (const auto& label : over) traced[layout.index_of(label)] = 1;

  std::vector<Slot> kept_slots;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (!traced[i]) kept_slots.push_back(layout.slots()[i]);
  }
  SubsystemLayout kept_layout(kept_slots);

  const auto dims = dims_of(layout);
  const std::size_t total = layout.total_dim();
  std::vector<std::size_t> kept_index(total), traced_index(total), digits;
  for (std::size_t r = 0; r < total; ++r) {
    digits_of(r, dims, digits);
    std::size_t k = 0, t = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
      if (traced[i]) t = t * dims[i] + digits[i];
      else k = k * dims[i] + digits[i];
    }
    kept_index[r] = k;
    traced_index[r] = t;
  }

  const auto kd = static_cast<Eigen::Index>(kept_layout.total_dim());
  ComplexMatrix out = ComplexMatrix::Zero(kd, kd);
  const auto& m = op.matrix();
  for (std::size_t r = 0; r < total; ++r) {
    for (std::size_t c = 0; c < total; ++c) {
      if (traced_index[r] == traced_index[c]) {
        out(static_cast<Eigen::Index>(kept_index[r]), static_cast<Eigen::Index>(kept_index[c])) +=
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      }
    }
  }
  // Restore exact Hermiticity lost to summation order.
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityOperator(std::move(kept_layout), std::move(out));
}

ComplexMatrix permute_slots(const ComplexMatrix& m, const SubsystemLayout& layout,
                            const std::vector<std::string>& order) {
  if (order.size() != layout.size()) {
    throw Error(ErrorKind::LayoutMismatch, "slot permutation must name every slot exactly once");
  }
  std::vector<std::size_t> source;  // new position -> old position
  std::set<std::size_t> seen;
  for (const auto& label : order) {
    const auto i = layout.index_of(label);
    if (!seen.insert(i).second) throw Error(ErrorKind::LayoutMismatch, "slot named twice: " + label);
    source.push_back(i);
  }
  const auto dims = dims_of(layout);
  std::vector<std::size_t> new_dims;
  for (auto i : source) new_dims.push_back(dims[i]);

  const std::size_t total = layout.total_dim();
  std::vector<std::size_t> new_index(total), digits;
  for (std::size_t r = 0; r < total; ++r) {
    digits_of(r, dims, digits);
    std::size_t k = 0;
    for (std::size_t p = 0; p < source.size(); ++p) k = k * new_dims[p] + digits[source[p]];
    new_index[r] = k;
  }
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < total; ++r) {
    for (std::size_t c = 0; c < total; ++c) {
      out(static_cast<Eigen::Index>(new_index[r]), static_cast<Eigen::Index>(new_index[c])) =
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

DensityOperator permute_slots(const DensityOperator& op, const std::vector<std::string>& order) {
  std::vector<Slot> slots;
  for (const auto& label : order) slots.push_back(op.layout().slots()[op.layout().index_of(label)]);
  return DensityOperator(SubsystemLayout(std::move(slots)),
                         permute_slots(op.matrix(), op.layout(), order));
}

Complex trace_with_product(const ComplexMatrix& state, std::span<const ComplexMatrix* const> factors) {
  ComplexMatrix product = ComplexMatrix::Identity(1, 1);
  for (const auto* f : factors) product = kron(product, *f);
  if (product.rows() != state.rows()) {
    throw Error(ErrorKind::LayoutMismatch, "operator product dimension differs from the state");
  }
  // Tr(ρ M) = Σ_ij ρ_ij M_ji
  return state.cwiseProduct(product.transpose()).sum();
}

double clean_probability(double p) {
  if (p < -1e-12) {
    std::ostringstream msg;
    msg << "Born rule produced negative probability " << p;
    throw Error(ErrorKind::InvalidOperator, msg.str());
  }
  if (std::abs(p) < kProbabilityFloor || p < 0.0) return 0.0;
  return p;
}

Behavior born_rule(const DensityOperator& state, const std::vector<PartyMeasurement>& parties) {
  std::vector<std::string> order;
  std::vector<Variable> outcomes;
  for (const auto& pm : parties) {
    if (pm.povm.num_inputs() != 1) {
      throw Error(ErrorKind::LayoutMismatch, "born_rule takes single-input POVMs; party " + pm.party);
    }
    for (const auto& slot : pm.povm.layout().slots()) {
      const auto i = state.layout().find(slot.label);
      if (!i) throw Error(ErrorKind::LayoutMismatch, "state has no slot " + slot.label);
      if (state.layout().slots()[*i].dim != slot.dim) {
        throw Error(ErrorKind::LayoutMismatch, "dimension mismatch on slot " + slot.label);
      }
      order.push_back(slot.label);
    }
    outcomes.push_back({pm.party, pm.povm.num_outcomes()});
  }
  if (order.size() != state.layout().size()) {
    throw Error(ErrorKind::LayoutMismatch, "party slots do not cover the state layout");
  }
  const ComplexMatrix rho = permute_slots(state.matrix(), state.layout(), order);

  Behavior result(outcomes);
  std::vector<const ComplexMatrix*> factors(parties.size());
  for (std::size_t o = 0; o < result.outcome_count(); ++o) {
    const auto values = decode_tuple(outcomes, o);
    for (std::size_t k = 0; k < parties.size(); ++k) factors[k] = &parties[k].povm.element(values[k]);
    result.at(o) = clean_probability(trace_with_product(rho, factors).real());
  }
  return result;
}

}  // namespace latentsplit

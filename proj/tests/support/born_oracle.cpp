#include "born_oracle.hpp"

#include <map>

namespace testsupport {

using namespace latentsplit;

namespace {

struct GlobalSlot {
  std::string label;
  std::size_t dim;
};

}  // namespace

Behavior dense_born(const QuantumStrategy& s) {
  const auto& net = s.network;
  std::vector<GlobalSlot> slots;
  ComplexMatrix rho = ComplexMatrix::Ones(1, 1);
  for (const auto& l : net.latent()) {
    const auto& st = s.states.at(l);
    for (const auto& sl : st.layout().slots()) slots.push_back({sl.label, sl.dim});
    const ComplexMatrix& m = st.matrix();
    ComplexMatrix next(rho.rows() * m.rows(), rho.cols() * m.cols());
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
      for (Eigen::Index j = 0; j < rho.cols(); ++j) next.block(i * m.rows(), j * m.cols(), m.rows(), m.cols()) = rho(i, j) * m;
    }
    rho = std::move(next);
  }
  const std::size_t dim = static_cast<std::size_t>(rho.rows());

  // Digit of global index i for slot k (first slot most significant).
  std::vector<std::size_t> stride(slots.size(), 1);
  for (std::size_t k = slots.size(); k-- > 1;) stride[k - 1] = stride[k] * slots[k].dim;
  auto digit = [&](std::size_t i, std::size_t k) { return (i / stride[k]) % slots[k].dim; };

  const auto parties = net.parties();
  const auto inputs = net.inputs();
  struct PartyInfo {
    std::vector<std::size_t> global;  // global slot of each POVM slot
    std::vector<std::size_t> local_dim;
    std::vector<std::string> parents;
  };
  std::vector<PartyInfo> info;
  for (const auto& p : parties) {
    const auto& povm = s.measurements.at(p.name);
    PartyInfo pi;
    for (const auto& sl : povm.layout().slots()) {
      for (std::size_t k = 0; k < slots.size(); ++k) {
        if (slots[k].label == sl.label) pi.global.push_back(k);
      }
      pi.local_dim.push_back(sl.dim);
    }
    pi.parents = net.observed_parents(p.name);
    info.push_back(std::move(pi));
  }
  auto local_index = [&](const PartyInfo& pi, std::size_t global_index) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < pi.global.size(); ++k) idx = idx * pi.local_dim[k] + digit(global_index, pi.global[k]);
    return idx;
  };

  Behavior out(parties, inputs);
  for (std::size_t c = 0; c < out.condition_count(); ++c) {
    const auto in_vals = decode_tuple(inputs, c);
    for (std::size_t o = 0; o < out.outcome_count(); ++o) {
      const auto vals = decode_tuple(parties, o);
      std::map<std::string, std::size_t> value;
      for (std::size_t k = 0; k < inputs.size(); ++k) value[inputs[k].name] = in_vals[k];
      for (std::size_t k = 0; k < parties.size(); ++k) value[parties[k].name] = vals[k];

      std::vector<const ComplexMatrix*> elem;
      for (std::size_t k = 0; k < parties.size(); ++k) {
        std::size_t input = 0;
        for (const auto& par : info[k].parents) input = input * net.observed_node(par).card + value.at(par);
        elem.push_back(&s.measurements.at(parties[k].name).element(vals[k], input));
      }
      Complex total = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
          const Complex r = rho(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
          if (r == Complex(0.0)) continue;
          // Slots not measured by anyone would need i == j; every slot is measured here.
          Complex m = 1.0;
          for (std::size_t k = 0; k < parties.size() && m != Complex(0.0); ++k) {
            const auto li = static_cast<Eigen::Index>(local_index(info[k], i));
            const auto lj = static_cast<Eigen::Index>(local_index(info[k], j));
            m *= (*elem[k])(li, lj);
          }
          total += r * m;
        }
      }
      out.at(o, c) = total.real();
    }
  }
  return out;
}

}  // namespace testsupport

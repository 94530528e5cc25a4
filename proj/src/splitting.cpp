#include "latentsplit/splitting.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "latentsplit/error.hpp"

namespace latentsplit {

std::string split_latent_name(std::string_view source, std::string_view party) {
  return "hat(" + slot_label(source, party) + ")";
}

QuantumStrategy split_state(const QuantumStrategy& strategy, const SplitSpec& spec) {
  const auto& net = strategy.network;
  if (!net.is_latent(spec.source) || !net.has_edge(spec.source, spec.party)) {
    throw Error(ErrorKind::NotAnEdge, spec.source + "->" + spec.party + " is not a latent edge");
  }
  const std::string old_slot = slot_label(spec.source, spec.party);
  const std::string fresh = split_latent_name(spec.source, spec.party);
  const std::string fresh_slot = slot_label(fresh, spec.party);
  if (net.is_latent(fresh) || net.is_observed(fresh)) {
    throw Error(ErrorKind::InvalidNetwork, "node " + fresh + " already exists");
  }

  const DensityOperator& rho = strategy.states.at(spec.source);
  const auto& layout = rho.layout();
  const std::size_t dim = layout.slots()[layout.index_of(old_slot)].dim;

  DensityOperator severed = [&] {
    if (spec.replacement) {
      const auto& r = *spec.replacement;
      if (r.layout().size() != 1 || r.layout().slots()[0].dim != dim) {
        throw Error(ErrorKind::LayoutMismatch, "replacement for " + old_slot + " must be a single slot of dimension " +
                                                   std::to_string(dim));
      }
      return DensityOperator(SubsystemLayout({{fresh_slot, dim}}), r.matrix());
    }
    std::vector<std::string> others;
    for (const auto& s : layout.slots()) {
      if (s.label != old_slot) others.push_back(s.label);
    }
    const auto marginal = partial_trace(rho, others);
    return DensityOperator(SubsystemLayout({{fresh_slot, dim}}), marginal.matrix());
  }();

  std::vector<std::string> latent;
  std::vector<Edge> edges;
  const bool keep_source = net.children(spec.source).size() > 1;
  for (const auto& l : net.latent()) {
    if (l != spec.source || keep_source) latent.push_back(l);
  }
  latent.push_back(fresh);
  for (const auto& e : net.edges()) {
    if (!(e.first == spec.source && e.second == spec.party)) edges.push_back(e);
  }
  edges.emplace_back(fresh, spec.party);

  QuantumStrategy out{CausalNetwork(net.observed(), std::move(latent), std::move(edges)), strategy.states,
                      strategy.measurements};
  out.states.erase(spec.source);
  if (keep_source) out.states.emplace(spec.source, partial_trace(rho, {old_slot}));
  out.states.emplace(fresh, std::move(severed));
  auto it = out.measurements.find(spec.party);
  it->second = it->second.relabeled(old_slot, fresh_slot);
  return out;
}

QuantumStrategy split_all(const QuantumStrategy& strategy, const SplitSequence& seq) {
  std::set<std::pair<std::string, std::string>> seen;
  QuantumStrategy current = strategy;
  for (const auto& spec : seq) {
    if (!seen.emplace(spec.source, spec.party).second) {
      throw Error(ErrorKind::NotAnEdge, "edge " + spec.source + "->" + spec.party + " split twice");
    }
    current = split_state(current, spec);
  }
  return current;
}

Behavior interventional_behavior(const QuantumStrategy& strategy, const SplitSequence& seq) {
  return quantum_behavior(split_all(strategy, seq));
}

SplitSequence full_split(const CausalNetwork& net, std::string_view party) {
  SplitSequence seq;
  for (const auto& l : net.latent_parents(party)) seq.push_back({l, std::string(party), std::nullopt});
  return seq;
}

namespace {

[[noreturn]] void zero_divisor(std::string_view target, double value) {
  std::ostringstream msg;
  msg << "P(" << target << " | do(parents)) = " << value << " is too small to divide by";
  throw Error(ErrorKind::ZeroDivisor, msg.str());
}

std::size_t position_of(const std::vector<Variable>& vars, std::string_view name) {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].name == name) return i;
  }
  throw Error(ErrorKind::UnknownParty, "no variable " + std::string(name));
}

}  // namespace

Behavior recover_do(const QuantumStrategy& strategy, std::string_view target) {
  const auto& net = strategy.network;
  const Variable target_var = net.observed_node(target);
  const auto parties = net.parties();
  const auto inputs = net.inputs();
  const Behavior obs = quantum_behavior(strategy);

  std::vector<Variable> rest;
  for (const auto& v : parties) {
    if (v.name != target) rest.push_back(v);
  }
  std::vector<Variable> conditions;
  for (const auto& v : inputs) {
    if (v.name != target) conditions.push_back(v);
  }
  conditions.push_back(target_var);
  Behavior result(rest, conditions);

  if (net.is_input(target)) {
    // Intervening on an input is conditioning on it.
    const std::size_t tpos = position_of(inputs, target);
    std::vector<std::size_t> in(inputs.size());
    for (std::size_t c = 0; c < result.condition_count(); ++c) {
      const auto cv = decode_tuple(conditions, c);
      for (std::size_t k = 0, j = 0; k < inputs.size(); ++k) in[k] = k == tpos ? cv.back() : cv[j++];
      const std::size_t ic = encode_tuple(inputs, in);
      for (std::size_t o = 0; o < result.outcome_count(); ++o) result.at(o, c) = obs.at(o, ic);
    }
    return result;
  }

  const Behavior inter = interventional_behavior(strategy, full_split(net, target));
  const std::size_t tpos = position_of(parties, target);

  std::vector<std::string> party_parents;
  for (const auto& p : net.observed_parents(target)) {
    if (!net.is_input(p)) party_parents.push_back(p);
  }
  std::vector<std::size_t> parent_pos;
  std::vector<Variable> parent_vars;
  for (const auto& p : party_parents) {
    parent_pos.push_back(position_of(parties, p));
    parent_vars.push_back(net.observed_node(p));
  }

  // divisor(t, parent values, input condition index) = P(t | do(parents), inputs)
  std::function<double(std::size_t, const std::vector<std::size_t>&, std::size_t)> divisor;
  Behavior table;  // storage for the chosen case
  Behavior parent_obs;
  if (party_parents.empty()) {
    table = obs.marginal({target_var.name});
    divisor = [&](std::size_t t, const std::vector<std::size_t>&, std::size_t ic) { return table.at(t, ic); };
  } else if (party_parents.size() == 1) {
    // The parent's recovered do-conditional, restricted to the target.
    table = recover_do(strategy, party_parents[0]).marginal({target_var.name});
    divisor = [&](std::size_t t, const std::vector<std::size_t>& pa, std::size_t ic) {
      auto cv = decode_tuple(inputs, ic);
      cv.push_back(pa[0]);
      return table.at(t, encode_tuple(table.conditions(), cv));
    };
  } else {
    // Ancestors are unaffected by the split, so P_int(t, pa) = P(t | do(pa)) P_obs(pa).
    std::vector<std::string> keep{target_var.name};
    keep.insert(keep.end(), party_parents.begin(), party_parents.end());
    table = inter.marginal(keep);
    parent_obs = obs.marginal(party_parents);
    divisor = [&](std::size_t t, const std::vector<std::size_t>& pa, std::size_t ic) {
      const double den = parent_obs.at(encode_tuple(parent_vars, pa), ic);
      if (den < kZeroDivisorTol) zero_divisor(target, den);
      std::vector<std::size_t> joint{t};
      joint.insert(joint.end(), pa.begin(), pa.end());
      return table.at(encode_tuple(table.outcomes(), joint), ic) / den;
    };
  }

  std::vector<std::size_t> full(parties.size()), pa(parent_pos.size());
  for (std::size_t c = 0; c < result.condition_count(); ++c) {
    const auto cv = decode_tuple(conditions, c);
    const std::size_t t = cv.back();
    const std::size_t ic = encode_tuple(inputs, std::span<const std::size_t>(cv.data(), cv.size() - 1));
    for (std::size_t o = 0; o < result.outcome_count(); ++o) {
      const auto rv = decode_tuple(rest, o);
      for (std::size_t k = 0, j = 0; k < parties.size(); ++k) full[k] = k == tpos ? t : rv[j++];
      for (std::size_t q = 0; q < parent_pos.size(); ++q) pa[q] = full[parent_pos[q]];
      const double d = divisor(t, pa, ic);
      if (d < kZeroDivisorTol) zero_divisor(target, d);
      result.at(o, c) = inter.at(encode_tuple(parties, full), ic) / d;
    }
  }
  return result;
}

}  // namespace latentsplit

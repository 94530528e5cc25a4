#include "latentsplit/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "latentsplit/error.hpp"

namespace latentsplit {

namespace {

[[noreturn]] void bad_network(const std::string& what) { throw Error(ErrorKind::InvalidNetwork, what); }

}  // namespace

CausalNetwork::CausalNetwork(std::vector<Variable> observed, std::vector<std::string> latent,
                             std::vector<Edge> edges)
    : observed_(std::move(observed)), latent_(std::move(latent)), edges_(std::move(edges)) {
  std::set<std::string> names;
  for (const auto& v : observed_) {
    if (v.name.empty() || !names.insert(v.name).second) bad_network("duplicate or empty node name " + v.name);
    if (v.card < 1) bad_network("observed node " + v.name + " needs a positive cardinality");
  }
  for (const auto& l : latent_) {
    if (l.empty() || !names.insert(l).second) bad_network("duplicate or empty node name " + l);
  }
  std::set<Edge> seen;
  for (const auto& e : edges_) {
    if (!names.count(e.first) || !names.count(e.second)) {
      bad_network("edge " + e.first + "->" + e.second + " references an unknown node");
    }
    if (e.first == e.second) bad_network("self loop on " + e.first);
    if (is_latent(e.second)) bad_network("latent node " + e.second + " cannot have parents");
    if (!seen.insert(e).second) bad_network("duplicate edge " + e.first + "->" + e.second);
  }
  for (const auto& l : latent_) {
    if (children(l).empty()) bad_network("latent node " + l + " has no children");
  }
  topological_observed();  // throws on cycles
}

bool CausalNetwork::is_observed(std::string_view name) const {
  return std::any_of(observed_.begin(), observed_.end(), [&](const Variable& v) { return v.name == name; });
}

bool CausalNetwork::is_latent(std::string_view name) const {
  return std::find(latent_.begin(), latent_.end(), name) != latent_.end();
}

bool CausalNetwork::has_edge(std::string_view from, std::string_view to) const {
  return std::any_of(edges_.begin(), edges_.end(),
                     [&](const Edge& e) { return e.first == from && e.second == to; });
}

const Variable& CausalNetwork::observed_node(std::string_view name) const {
  for (const auto& v : observed_) {
    if (v.name == name) return v;
  }
  throw Error(ErrorKind::UnknownParty, "no observed node named " + std::string(name));
}

std::vector<std::string> CausalNetwork::latent_parents(std::string_view node) const {
  std::vector<std::string> out;
  for (const auto& l : latent_) {
    if (has_edge(l, node)) out.push_back(l);
  }
  return out;
}

std::vector<std::string> CausalNetwork::observed_parents(std::string_view node) const {
  std::vector<std::string> out;
  for (const auto& v : observed_) {
    if (has_edge(v.name, node)) out.push_back(v.name);
  }
  return out;
}

std::vector<std::string> CausalNetwork::children(std::string_view node) const {
  std::vector<std::string> out;
  for (const auto& v : observed_) {
    if (has_edge(node, v.name)) out.push_back(v.name);
  }
  return out;
}

bool CausalNetwork::is_input(std::string_view name) const {
  observed_node(name);
  return std::none_of(edges_.begin(), edges_.end(), [&](const Edge& e) { return e.second == name; });
}

std::vector<Variable> CausalNetwork::inputs() const {
  std::vector<Variable> out;
  for (const auto& v : observed_) {
    if (is_input(v.name)) out.push_back(v);
  }
  return out;
}

std::vector<Variable> CausalNetwork::parties() const {
  std::vector<Variable> out;
  for (const auto& v : observed_) {
    if (!is_input(v.name)) out.push_back(v);
  }
  return out;
}

std::vector<std::string> CausalNetwork::topological_observed() const {
  std::vector<std::string> order;
  std::set<std::string> placed;
  while (order.size() < observed_.size()) {
    bool progress = false;
    for (const auto& v : observed_) {
      if (placed.count(v.name)) continue;
      const auto pa = observed_parents(v.name);
      if (std::all_of(pa.begin(), pa.end(), [&](const std::string& p) { return placed.count(p) > 0; })) {
        order.push_back(v.name);
        placed.insert(v.name);
        progress = true;
      }
    }
    if (!progress) bad_network("observed edges contain a cycle");
  }
  return order;
}

std::string slot_label(std::string_view source, std::string_view party) {
  std::string s(source);
  s += "->";
  s += party;
  return s;
}

Behavior classical_behavior(const CausalNetwork& net, const ClassicalModel& model) {
  auto mismatch = [](const std::string& what) { throw Error(ErrorKind::ModelMismatch, what); };

  std::vector<Variable> latent_vars;
  std::vector<const std::vector<double>*> latent_dist;
  for (const auto& l : net.latent()) {
    auto it = model.sources.find(l);
    if (it == model.sources.end()) mismatch("no distribution for source " + l);
    const auto& p = it->second;
    if (p.empty()) mismatch("empty distribution for source " + l);
    double sum = 0.0;
    for (double x : p) {
      if (x < 0.0) mismatch("negative probability in source " + l);
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12) mismatch("distribution of source " + l + " does not sum to 1");
    latent_vars.push_back({l, p.size()});
    latent_dist.push_back(&p);
  }
  if (model.sources.size() != net.latent().size()) mismatch("model has distributions for unknown sources");

  const auto inputs = net.inputs();
  const auto parties = net.parties();
  const auto& observed = net.observed();

  auto card_of = [&](const std::string& name) -> std::size_t {
    for (const auto& v : latent_vars) {
      if (v.name == name) return v.card;
    }
    return net.observed_node(name).card;
  };

  // Per party: the response table and, for each of its conditions, where to read the value.
  struct Lookup {
    const Behavior* table;
    std::vector<std::pair<bool, std::size_t>> sources;  // (is_latent, index)
  };
  std::vector<Lookup> lookups;
  for (const auto& party : parties) {
    auto it = model.responses.find(party.name);
    if (it == model.responses.end()) mismatch("no response table for " + party.name);
    const Behavior& table = it->second;
    if (table.outcomes().size() != 1 || table.outcomes()[0] != party) {
      mismatch("response table of " + party.name + " must have the party as its only outcome");
    }
    auto parents = net.latent_parents(party.name);
    for (const auto& p : net.observed_parents(party.name)) parents.push_back(p);
    if (table.conditions().size() != parents.size()) mismatch("response table conditions of " + party.name);
    Lookup lk{&table, {}};
    for (const auto& cond : table.conditions()) {
      if (std::find(parents.begin(), parents.end(), cond.name) == parents.end()) {
        mismatch(cond.name + " is not a parent of " + party.name);
      }
      if (cond.card != card_of(cond.name)) mismatch("cardinality of " + cond.name + " in table of " + party.name);
      if (net.is_latent(cond.name)) {
        const auto pos = std::find(net.latent().begin(), net.latent().end(), cond.name) - net.latent().begin();
        lk.sources.emplace_back(true, static_cast<std::size_t>(pos));
      } else {
        std::size_t pos = 0;
        while (observed[pos].name != cond.name) ++pos;
        lk.sources.emplace_back(false, pos);
      }
    }
    table.validate(1e-12);
    lookups.push_back(std::move(lk));
  }
  for (const auto& [name, table] : model.responses) {
    if (!net.is_observed(name) || net.is_input(name)) mismatch("response table for non-party " + name);
  }

  // Positions of inputs and parties within the full observed list.
  std::vector<std::size_t> input_pos, party_pos;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    (net.is_input(observed[i].name) ? input_pos : party_pos).push_back(i);
  }

  Behavior result(parties, inputs);
  std::vector<std::size_t> obs_values(observed.size());
  std::vector<std::size_t> cond_values;
  for (std::size_t c = 0; c < result.condition_count(); ++c) {
    const auto in = decode_tuple(inputs, c);
    for (std::size_t i = 0; i < in.size(); ++i) obs_values[input_pos[i]] = in[i];
    for (std::size_t li = 0; li < tuple_count(latent_vars); ++li) {
      const auto lat = decode_tuple(latent_vars, li);
      double w = 1.0;
      for (std::size_t k = 0; k < lat.size(); ++k) w *= (*latent_dist[k])[lat[k]];
      if (w == 0.0) continue;
      for (std::size_t o = 0; o < result.outcome_count(); ++o) {
        const auto out = decode_tuple(parties, o);
        for (std::size_t i = 0; i < out.size(); ++i) obs_values[party_pos[i]] = out[i];
        double p = w;
        for (std::size_t j = 0; j < lookups.size() && p != 0.0; ++j) {
          const auto& lk = lookups[j];
          cond_values.resize(lk.sources.size());
          for (std::size_t k = 0; k < lk.sources.size(); ++k) {
            cond_values[k] = lk.sources[k].first ? lat[lk.sources[k].second] : obs_values[lk.sources[k].second];
          }
          const std::size_t single[1] = {out[j]};
          p *= (*lk.table)(single, cond_values);
        }
        result.at(o, c) += p;
      }
    }
  }
  return result;
}

void QuantumStrategy::validate() const {
  auto mismatch = [](const std::string& what) { throw Error(ErrorKind::LayoutMismatch, what); };
  for (const auto& l : network.latent()) {
    auto it = states.find(l);
    if (it == states.end()) mismatch("no state for source " + l);
    std::set<std::string> expected, actual;
    for (const auto& c : network.children(l)) expected.insert(slot_label(l, c));
    for (const auto& s : it->second.layout().slots()) actual.insert(s.label);
    if (expected != actual) mismatch("slots of source " + l + " do not match its children");
  }
  if (states.size() != network.latent().size()) mismatch("state given for an unknown source");

  for (const auto& party : network.parties()) {
    auto it = measurements.find(party.name);
    if (it == measurements.end()) mismatch("no measurement for party " + party.name);
    const Povm& povm = it->second;
    const auto lat = network.latent_parents(party.name);
    if (povm.layout().size() != lat.size()) mismatch("POVM of " + party.name + " has the wrong slot count");
    for (const auto& l : lat) {
      const auto label = slot_label(l, party.name);
      const auto i = povm.layout().find(label);
      if (!i) mismatch("POVM of " + party.name + " lacks slot " + label);
      const auto& st = states.at(l).layout();
      if (povm.layout().slots()[*i].dim != st.slots()[st.index_of(label)].dim) {
        mismatch("dimension of slot " + label + " differs between state and POVM");
      }
    }
    std::vector<Variable> pa;
    for (const auto& p : network.observed_parents(party.name)) pa.push_back(network.observed_node(p));
    if (povm.num_inputs() != tuple_count(pa)) {
      mismatch("POVM of " + party.name + " needs one setting per observed-parent value");
    }
    if (povm.num_outcomes() != party.card) mismatch("POVM of " + party.name + " has the wrong outcome count");
  }
  for (const auto& [name, povm] : measurements) {
    if (!network.is_observed(name) || network.is_input(name)) mismatch("measurement for non-party " + name);
  }
}

namespace {

// Behavior of the strategy with the listed parties forced: their POVMs become
// identities and their values are read from the trailing condition variables.
Behavior evaluate(const QuantumStrategy& strategy, const std::vector<std::string>& forced) {
  strategy.validate();
  const auto& net = strategy.network;
  const auto& observed = net.observed();
  auto is_forced = [&](const std::string& n) {
    return std::find(forced.begin(), forced.end(), n) != forced.end();
  };

  std::vector<Variable> outcomes, conditions;
  for (const auto& v : net.parties()) {
    if (!is_forced(v.name)) outcomes.push_back(v);
  }
  for (const auto& v : net.inputs()) {
    if (!is_forced(v.name)) conditions.push_back(v);
  }
  for (const auto& f : forced) conditions.push_back(net.observed_node(f));

  // Global state in latent declaration order, then permuted into party order.
  DensityOperator global = DensityOperator::maximally_mixed(SubsystemLayout{});
  for (const auto& l : net.latent()) global = tensor(global, strategy.states.at(l));

  struct Factor {
    std::size_t observed_index;
    const Povm* povm = nullptr;  // null for forced parties
    ComplexMatrix identity;
    std::vector<std::size_t> parent_index;
    std::vector<Variable> parent_vars;
  };
  std::vector<Factor> factors;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const auto& name = observed[i].name;
    if (net.is_input(name)) continue;
    Factor f;
    f.observed_index = i;
    const Povm& povm = strategy.measurements.at(name);
    for (const auto& s : povm.layout().slots()) order.push_back(s.label);
    if (is_forced(name)) {
      const auto d = static_cast<Eigen::Index>(povm.dim());
      f.identity = ComplexMatrix::Identity(d, d);
    } else {
      f.povm = &povm;
      for (const auto& p : net.observed_parents(name)) {
        std::size_t j = 0;
        while (observed[j].name != p) ++j;
        f.parent_index.push_back(j);
        f.parent_vars.push_back(observed[j]);
      }
    }
    factors.push_back(std::move(f));
  }
  const ComplexMatrix rho = permute_slots(global.matrix(), global.layout(), order);

  std::vector<std::size_t> outcome_pos, condition_pos;
  for (const auto& v : outcomes) {
    std::size_t j = 0;
    while (observed[j].name != v.name) ++j;
    outcome_pos.push_back(j);
  }
  for (const auto& v : conditions) {
    std::size_t j = 0;
    while (observed[j].name != v.name) ++j;
    condition_pos.push_back(j);
  }

  Behavior result(outcomes, conditions);
  std::vector<std::size_t> values(observed.size()), pa;
  std::vector<const ComplexMatrix*> ops(factors.size());
  for (std::size_t c = 0; c < result.condition_count(); ++c) {
    const auto cv = decode_tuple(conditions, c);
    for (std::size_t k = 0; k < cv.size(); ++k) values[condition_pos[k]] = cv[k];
    for (std::size_t o = 0; o < result.outcome_count(); ++o) {
      const auto ov = decode_tuple(outcomes, o);
      for (std::size_t k = 0; k < ov.size(); ++k) values[outcome_pos[k]] = ov[k];
      for (std::size_t k = 0; k < factors.size(); ++k) {
        const auto& f = factors[k];
        if (!f.povm) {
          ops[k] = &f.identity;
          continue;
        }
        pa.resize(f.parent_index.size());
        for (std::size_t q = 0; q < pa.size(); ++q) pa[q] = values[f.parent_index[q]];
        ops[k] = &f.povm->element(values[f.observed_index], encode_tuple(f.parent_vars, pa));
      }
      result.at(o, c) = clean_probability(trace_with_product(rho, ops).real());
    }
  }
  return result;
}

}  // namespace

Behavior quantum_behavior(const QuantumStrategy& strategy) { return evaluate(strategy, {}); }

Behavior pearl_do_quantum(const QuantumStrategy& strategy, std::string_view target) {
  const auto& node = strategy.network.observed_node(target);
  return evaluate(strategy, {node.name});
}

}  // namespace latentsplit

#include "latentsplit/joint_dag.hpp"

#include <algorithm>
#include <set>

#include "latentsplit/error.hpp"
#include "latentsplit/knowns.hpp"

namespace latentsplit {

std::string hat_name(std::string_view party) { return "hat(" + std::string(party) + ")"; }

const KnownTable* JointDag::find_table(std::string_view key) const {
  for (const auto& t : tables) {
    if (t.key == key) return &t;
  }
  if (key == "int" && !intervened.empty()) return &tables.back();
  return nullptr;
}

JointDag build_joint_dag(const CausalNetwork& net, const SplitSequence& splits) {
  std::map<std::string, std::set<std::string>> severed;
  std::vector<std::string> intervened;
  for (const auto& s : splits) {
    if (!net.is_latent(s.source) || !net.has_edge(s.source, s.party)) {
      throw Error(ErrorKind::NotAnEdge, s.source + "->" + s.party + " is not a latent edge");
    }
    if (!severed[s.party].insert(s.source).second) {
      throw Error(ErrorKind::NotAnEdge, "edge " + s.source + "->" + s.party + " split twice");
    }
    if (std::find(intervened.begin(), intervened.end(), s.party) == intervened.end()) intervened.push_back(s.party);
  }

  auto observed = net.observed();
  auto latent = net.latent();
  auto edges = net.edges();
  JointDag joint;
  for (const auto& party : intervened) {
    const std::string hat = hat_name(party);
    observed.push_back({hat, net.observed_node(party).card});
    joint.hat_of[party] = hat;
    for (const auto& l : net.latent_parents(party)) {
      if (severed[party].count(l)) {
        const auto fresh = split_latent_name(l, party);
        latent.push_back(fresh);
        edges.emplace_back(fresh, hat);
      } else {
        edges.emplace_back(l, hat);
      }
    }
    for (const auto& p : net.observed_parents(party)) edges.emplace_back(p, hat);
  }
  joint.network = CausalNetwork(std::move(observed), std::move(latent), std::move(edges));
  joint.intervened = intervened;

  KnownTable obs{"obs", {}};
  for (const auto& v : net.observed()) obs.variable_of[v.name] = v.name;
  joint.tables.push_back(obs);

  // Subsets ordered by size, then by position of their members.
  const std::size_t k = intervened.size();
  std::vector<std::vector<std::size_t>> subsets;
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (std::size_t{1} << i)) s.push_back(i);
    }
    subsets.push_back(std::move(s));
  }
  std::stable_sort(subsets.begin(), subsets.end(),
                   [](const auto& a, const auto& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
  for (const auto& s : subsets) {
    KnownTable t{"int[", {}};
    for (std::size_t i = 0; i < s.size(); ++i) t.key += (i ? "," : "") + intervened[s[i]];
    t.key += "]";
    for (const auto& v : net.observed()) {
      const bool hit = std::any_of(s.begin(), s.end(), [&](std::size_t i) { return intervened[i] == v.name; });
      t.variable_of[hit ? hat_name(v.name) : v.name] = v.name;
    }
    joint.tables.push_back(std::move(t));
  }
  return joint;
}

double atom_probability(const Knowns& knowns, const EventAtom& atom) {
  auto it = knowns.find(atom.table);
  if (it == knowns.end()) throw Error(ErrorKind::UnknownAtomReference, "no known table " + atom.table);
  if (it->second.condition_count() != 1) {
    throw Error(ErrorKind::UnknownAtomReference, "table " + atom.table + " is conditional");
  }
  return it->second.probability(atom.event);
}

}  // namespace latentsplit

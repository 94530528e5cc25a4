#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "latentsplit/behavior.hpp"
#include "latentsplit/tensor.hpp"

namespace latentsplit {

using Edge = std::pair<std::string, std::string>;

/// Two-layer causal structure: latent sources feeding observed nodes, plus
/// observed-to-observed edges. Observed nodes without any parent are inputs.
class CausalNetwork {
 public:
  CausalNetwork() = default;
  /// Throws InvalidNetwork on cycles, latent parents, childless latents or
  /// unknown/duplicate names.
  CausalNetwork(std::vector<Variable> observed, std::vector<std::string> latent, std::vector<Edge> edges);

  const std::vector<Variable>& observed() const { return observed_; }
  const std::vector<std::string>& latent() const { return latent_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool is_observed(std::string_view name) const;
  bool is_latent(std::string_view name) const;
  bool has_edge(std::string_view from, std::string_view to) const;
  /// Throws UnknownParty.
  const Variable& observed_node(std::string_view name) const;

  /// Latent parents in latent declaration order.
  std::vector<std::string> latent_parents(std::string_view node) const;
  /// Observed parents in observed declaration order.
  std::vector<std::string> observed_parents(std::string_view node) const;
  std::vector<std::string> children(std::string_view node) const;

  bool is_input(std::string_view name) const;
  /// Observed nodes that are inputs, in declaration order.
  std::vector<Variable> inputs() const;
  /// Observed nodes that are not inputs, in declaration order.
  std::vector<Variable> parties() const;
  /// Observed nodes ordered so that every parent precedes its children.
  std::vector<std::string> topological_observed() const;

 private:
  std::vector<Variable> observed_;
  std::vector<std::string> latent_;
  std::vector<Edge> edges_;
};

/// Tensor slot carried by a source towards one of its children.
std::string slot_label(std::string_view source, std::string_view party);

/// Classical causal parameters: source distributions and response tables.
/// A response table is a Behavior with one outcome variable (the party) and
/// the party's parents as conditions, in any order.
struct ClassicalModel {
  std::map<std::string, std::vector<double>> sources;
  std::map<std::string, Behavior> responses;
};

/// Exact sum over latent values. Inputs become conditions of the result.
/// Throws ModelMismatch.
Behavior classical_behavior(const CausalNetwork& net, const ClassicalModel& model);

/// Quantum causal model: one state per source, one POVM per non-input party.
/// A party's POVM acts on the slots slot_label(source, party) of its latent
/// parents, and has one element list per joint value of its observed parents
/// (mixed radix in observed declaration order).
struct QuantumStrategy {
  CausalNetwork network;
  std::map<std::string, DensityOperator> states;
  std::map<std::string, Povm> measurements;

  /// Throws LayoutMismatch.
  void validate() const;
};

/// Born-rule behavior over all non-input parties, conditioned on the inputs.
Behavior quantum_behavior(const QuantumStrategy& strategy);

/// Interventional do-conditional: the target's POVM is replaced by the
/// identity and its value is forced in its children. The result is over all
/// remaining non-input parties, conditioned on the other inputs followed by
/// the target. Throws UnknownParty.
Behavior pearl_do_quantum(const QuantumStrategy& strategy, std::string_view target);

}  // namespace latentsplit

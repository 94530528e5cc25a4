#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "latentsplit/joint_dag.hpp"
#include "latentsplit/knowns.hpp"
#include "latentsplit/lp.hpp"

namespace latentsplit {

enum class NodeKind { Observed, Latent };

struct InflationNode {
  std::string name;
  std::string original;  ///< node of the joint DAG
  NodeKind kind = NodeKind::Observed;
  std::string copy;      ///< copy index, e.g. "01"
};

/// Copies of joint-DAG nodes wired so that every inflated observed node sees
/// exactly one copy of each of its original latent parents.
class InflationGraph {
 public:
  /// Edges run from inflated latents to inflated observed nodes. Throws WiringInconsistent.
  InflationGraph(JointDag joint, std::vector<InflationNode> nodes, std::vector<Edge> edges);

  const JointDag& joint() const { return joint_; }
  const std::vector<InflationNode>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Indices into nodes(), in declaration order.
  const std::vector<std::size_t>& observed() const { return observed_; }
  const std::vector<std::size_t>& latent() const { return latent_; }
  /// Latent parents of the k-th observed node, as indices into nodes().
  const std::vector<std::size_t>& parents(std::size_t k) const { return parents_[k]; }

  std::size_t index_of(std::string_view name) const;
  std::size_t card(std::size_t k) const;  ///< outcome count of the k-th observed node

  /// Permutations of observed positions induced by relabelling latent copies
  /// (identity first).
  std::vector<std::vector<std::size_t>> symmetries() const;

 private:
  JointDag joint_;
  std::vector<InflationNode> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> observed_, latent_;
  std::vector<std::vector<std::size_t>> parents_;
};

struct InflationOptions {
  /// rgb4-fig5 only: both post-intervention copies read the same hat-latent copy.
  bool shared_hat_latent = false;
};

/// Presets: "trivial" (one copy of everything), "rgb4-fig5" (triangle with
/// gamma->A split, one extra copy of beta) and "carrot" (trivial, requires two
/// intervened parties). Throws WiringInconsistent.
InflationGraph build_inflation(const JointDag& joint, std::string_view preset, const InflationOptions& options = {});

/// {"latent":[{"name","original"}], "observed":[{"name","original","parents":[...]}]}
InflationGraph inflation_from_json(const JointDag& joint, const nlohmann::json& doc);

/// A group of inflated observed nodes whose joint distribution is one known table's marginal.
struct KnownBlock {
  std::vector<std::size_t> nodes;  ///< observed positions
  std::size_t table = 0;           ///< index into joint().tables
};

/// Observed positions whose distribution factorizes into known blocks.
struct InjectableSet {
  std::vector<std::size_t> nodes;  ///< sorted
  std::vector<KnownBlock> blocks;
};

/// Sets of at most max_size observed nodes in which every block (connected
/// component under shared latent parents) maps injectively into the joint DAG
/// and inside one of the allowed tables.
std::vector<InjectableSet> injectable_sets(const InflationGraph& infl, const std::vector<std::size_t>& allowed_tables,
                                           std::size_t max_size, bool maximal_only);

struct LpOptions {
  bool symmetry = true;
  bool maximal_sets_only = true;
  std::size_t max_set_size = 4;
};

/// Tables used are exactly the keys present in knowns ("obs" is required).
/// Throws UnknownBehaviorReference and CardinalityMismatch.
LinearProgram build_lp(const InflationGraph& infl, const Knowns& knowns, const LpOptions& options = {});

}  // namespace latentsplit

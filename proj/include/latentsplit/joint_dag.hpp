#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "latentsplit/network.hpp"
#include "latentsplit/splitting.hpp"

namespace latentsplit {

/// A table of data that constrains the joint DAG: its nodes and the variable
/// of the underlying behavior each node is read from.
struct KnownTable {
  std::string key;
  std::map<std::string, std::string> variable_of;
};

/// Observational network plus one post-intervention copy per intervened party.
struct JointDag {
  CausalNetwork network;
  std::vector<std::string> intervened;
  std::map<std::string, std::string> hat_of;
  /// "obs" first, then one "int[...]" table per non-empty subset of intervened parties.
  std::vector<KnownTable> tables;

  /// Accepts "int" as an alias for the table with every intervened party.
  const KnownTable* find_table(std::string_view key) const;
};

std::string hat_name(std::string_view party);

/// Observed-to-observed edges into a split party are copied to its hat node.
/// Throws NotAnEdge.
JointDag build_joint_dag(const CausalNetwork& net, const SplitSequence& splits);

}  // namespace latentsplit

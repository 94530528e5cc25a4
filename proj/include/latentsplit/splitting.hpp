#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "latentsplit/network.hpp"

namespace latentsplit {

/// Severs the edge source->party. Without a custom replacement the party
/// receives the reduced state of its own slot of the source.
struct SplitSpec {
  std::string source;
  std::string party;
  std::optional<DensityOperator> replacement;
};

using SplitSequence = std::vector<SplitSpec>;

/// Name of the fresh latent node created by splitting source->party.
std::string split_latent_name(std::string_view source, std::string_view party);

/// Throws NotAnEdge when source->party is not a latent edge of the strategy.
QuantumStrategy split_state(const QuantumStrategy& strategy, const SplitSpec& spec);

/// Applies the splits in order and evaluates the resulting behavior.
/// Throws NotAnEdge on duplicate pairs.
QuantumStrategy split_all(const QuantumStrategy& strategy, const SplitSequence& seq);
Behavior interventional_behavior(const QuantumStrategy& strategy, const SplitSequence& seq);

/// Splits of every latent edge into the party.
SplitSequence full_split(const CausalNetwork& net, std::string_view party);

/// P(rest | do(target)) inferred from observational and interventional data
/// only, in the same shape as pearl_do_quantum. Throws ZeroDivisor when a
/// required divisor falls below 1e-9.
Behavior recover_do(const QuantumStrategy& strategy, std::string_view target);

inline constexpr double kZeroDivisorTol = 1e-9;

}  // namespace latentsplit

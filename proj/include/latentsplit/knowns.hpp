#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "latentsplit/behavior.hpp"

namespace latentsplit {

/// Known behaviors by table key: "obs", "int" (all intervened parties) or
/// "int[A]", "int[A,B]", ...
using Knowns = std::map<std::string, Behavior>;

/// Probability of an event in one known, unconditioned table.
struct EventAtom {
  std::string table;
  Event event;

  auto operator<=>(const EventAtom&) const = default;
};

/// Throws UnknownAtomReference for a missing table or variable.
double atom_probability(const Knowns& knowns, const EventAtom& atom);

}  // namespace latentsplit

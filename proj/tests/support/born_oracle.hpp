#pragma once

#include "latentsplit/network.hpp"

namespace testsupport {

/// Brute-force Born rule: builds the global state as an explicit Kronecker
/// product and sums rho(j,i) * prod_p E_p(i_p, j_p) over all basis index pairs,
/// with each party's element picked by its observed parents' values. Shares no
/// code with the library's evaluator beyond the data types.
latentsplit::Behavior dense_born(const latentsplit::QuantumStrategy& s);

}  // namespace testsupport

#pragma once

#include <string>

#include <json.hpp>

#include "latentsplit/network.hpp"
#include "latentsplit/splitting.hpp"

namespace latentsplit {

// Document layout is described in docs/formats.md. All parsers throw ParseError
// on malformed documents and the usual domain errors on invalid content.

CausalNetwork network_from_json(const nlohmann::json& doc);
nlohmann::json network_to_json(const CausalNetwork& net);

QuantumStrategy strategy_from_json(const nlohmann::json& doc);
nlohmann::json strategy_to_json(const QuantumStrategy& strategy);

/// [["gamma","A"],["alpha","B"]]
SplitSequence splits_from_json(const nlohmann::json& doc);

nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& doc);

nlohmann::json behavior_to_json(const Behavior& b);

nlohmann::json read_json_file(const std::string& path);

}  // namespace latentsplit

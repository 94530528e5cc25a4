#include "latentsplit/network_json.hpp"

#include <fstream>

#include "latentsplit/error.hpp"

namespace latentsplit {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const json& member(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) parse_error(std::string("missing key \"") + key + "\"");
  return doc.at(key);
}

SubsystemLayout layout_from_json(const json& doc) {
  if (!doc.is_array()) parse_error("slots must be an array");
  std::vector<Slot> slots;
  for (const auto& s : doc) slots.push_back({member(s, "label").get<std::string>(), member(s, "dim").get<std::size_t>()});
  return SubsystemLayout(std::move(slots));
}

json layout_to_json(const SubsystemLayout& layout) {
  json out = json::array();
  for (const auto& s : layout.slots()) out.push_back({{"label", s.label}, {"dim", s.dim}});
  return out;
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& doc) {
  if (!doc.is_array() || doc.empty()) parse_error("matrix must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(doc.size());
  const auto cols = static_cast<Eigen::Index>(doc.front().size());
  ComplexMatrix m(n, cols);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = doc[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) parse_error("ragged matrix");
    for (Eigen::Index j = 0; j < cols; ++j) {
      const auto& entry = row[static_cast<std::size_t>(j)];
      if (entry.is_number()) {
        m(i, j) = entry.get<double>();
      } else if (entry.is_array() && entry.size() == 2) {
        m(i, j) = Complex(entry[0].get<double>(), entry[1].get<double>());
      } else {
        parse_error("matrix entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

CausalNetwork network_from_json(const json& doc) {
  try {
    std::vector<Variable> observed;
    for (const auto& o : member(doc, "observed")) {
      observed.push_back({member(o, "name").get<std::string>(), member(o, "card").get<std::size_t>()});
    }
    auto latent = member(doc, "latent").get<std::vector<std::string>>();
    std::vector<Edge> edges;
    for (const auto& e : member(doc, "edges")) {
      if (!e.is_array() || e.size() != 2) parse_error("edges must be [from, to] pairs");
      edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
    return CausalNetwork(std::move(observed), std::move(latent), std::move(edges));
  } catch (const json::exception& ex) {
    parse_error(ex.what());
  }
}

json network_to_json(const CausalNetwork& net) {
  json observed = json::array();
  for (const auto& v : net.observed()) observed.push_back({{"name", v.name}, {"card", v.card}});
  json edges = json::array();
  for (const auto& [from, to] : net.edges()) edges.push_back({from, to});
  return {{"observed", observed}, {"latent", net.latent()}, {"edges", edges}};
}

QuantumStrategy strategy_from_json(const json& doc) {
  try {
    QuantumStrategy s{network_from_json(doc), {}, {}};
    for (const auto& [name, st] : member(doc, "states").items()) {
      s.states.emplace(name, DensityOperator(layout_from_json(member(st, "slots")), matrix_from_json(member(st, "matrix"))));
    }
    for (const auto& [name, pv] : member(doc, "povms").items()) {
      std::vector<std::vector<ComplexMatrix>> elements;
      for (const auto& setting : member(pv, "elements")) {
        std::vector<ComplexMatrix> list;
        for (const auto& e : setting) list.push_back(matrix_from_json(e));
        elements.push_back(std::move(list));
      }
      s.measurements.emplace(name, Povm(layout_from_json(member(pv, "slots")), std::move(elements)));
    }
    s.validate();
    return s;
  } catch (const json::exception& ex) {
    parse_error(ex.what());
  }
}

json strategy_to_json(const QuantumStrategy& strategy) {
  json doc = network_to_json(strategy.network);
  json states = json::object();
  for (const auto& [name, st] : strategy.states) {
    states[name] = {{"slots", layout_to_json(st.layout())}, {"matrix", matrix_to_json(st.matrix())}};
  }
  json povms = json::object();
  for (const auto& [name, pv] : strategy.measurements) {
    json settings = json::array();
    for (std::size_t x = 0; x < pv.num_inputs(); ++x) {
      json list = json::array();
      for (std::size_t a = 0; a < pv.num_outcomes(); ++a) list.push_back(matrix_to_json(pv.element(a, x)));
      settings.push_back(std::move(list));
    }
    povms[name] = {{"slots", layout_to_json(pv.layout())}, {"elements", settings}};
  }
  doc["states"] = std::move(states);
  doc["povms"] = std::move(povms);
  return doc;
}

SplitSequence splits_from_json(const json& doc) {
  if (!doc.is_array()) parse_error("split sequence must be an array of [source, party] pairs");
  SplitSequence seq;
  for (const auto& e : doc) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
      parse_error("split sequence entries must be [source, party] string pairs");
    }
    seq.push_back({e[0].get<std::string>(), e[1].get<std::string>(), std::nullopt});
  }
  return seq;
}

json behavior_to_json(const Behavior& b) {
  auto vars = [](const std::vector<Variable>& vs) {
    json out = json::array();
    for (const auto& v : vs) out.push_back({{"name", v.name}, {"card", v.card}});
    return out;
  };
  return {{"outcomes", vars(b.outcomes())}, {"conditions", vars(b.conditions())}, {"table", b.table()}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    parse_error(path + ": " + ex.what());
  }
}

}  // namespace latentsplit

#include "latentsplit/inflation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "latentsplit/error.hpp"

namespace latentsplit {

namespace {

[[noreturn]] void inconsistent(const std::string& what) { throw Error(ErrorKind::WiringInconsistent, what); }

}  // namespace

InflationGraph::InflationGraph(JointDag joint, std::vector<InflationNode> nodes, std::vector<Edge> edges)
    : joint_(std::move(joint)), nodes_(std::move(nodes)), edges_(std::move(edges)) {
  const auto& net = joint_.network;
  for (const auto& [from, to] : net.edges()) {
    if (net.is_observed(from)) inconsistent("inflation needs a joint DAG without observed-to-observed edges");
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (!names.insert(n.name).second) inconsistent("duplicate inflated node " + n.name);
    const bool ok = n.kind == NodeKind::Observed ? net.is_observed(n.original) : net.is_latent(n.original);
    if (!ok) inconsistent(n.name + " copies " + n.original + ", which is not a node of the same kind");
    (n.kind == NodeKind::Observed ? observed_ : latent_).push_back(i);
  }
  parents_.resize(observed_.size());
  std::vector<std::size_t> child_count(nodes_.size(), 0);
  for (const auto& [from, to] : edges_) {
    const auto f = index_of(from);
    const auto t = index_of(to);
    if (nodes_[f].kind != NodeKind::Latent || nodes_[t].kind != NodeKind::Observed) {
      inconsistent("inflation edge " + from + "->" + to + " must run from a latent to an observed node");
    }
    if (!net.has_edge(nodes_[f].original, nodes_[t].original)) {
      inconsistent("edge " + from + "->" + to + " has no counterpart in the joint DAG");
    }
    const auto k = static_cast<std::size_t>(std::find(observed_.begin(), observed_.end(), t) - observed_.begin());
    parents_[k].push_back(f);
    ++child_count[f];
  }
  for (std::size_t k = 0; k < observed_.size(); ++k) {
    const auto& node = nodes_[observed_[k]];
    std::multiset<std::string> got;
    for (auto p : parents_[k]) got.insert(nodes_[p].original);
    const auto want_list = net.latent_parents(node.original);
    const std::multiset<std::string> want(want_list.begin(), want_list.end());
    if (got != want) inconsistent(node.name + " must receive exactly one copy of each parent of " + node.original);
    std::sort(parents_[k].begin(), parents_[k].end());
  }
  for (auto l : latent_) {
    if (child_count[l] == 0) inconsistent("inflated latent " + nodes_[l].name + " has no children");
  }
}

std::size_t InflationGraph::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].name == name) return i;
  }
  inconsistent("unknown inflated node " + std::string(name));
}

std::size_t InflationGraph::card(std::size_t k) const {
  return joint_.network.observed_node(nodes_[observed_[k]].original).card;
}

std::vector<std::vector<std::size_t>> InflationGraph::symmetries() const {
  // Copies grouped by original latent.
  std::map<std::string, std::vector<std::size_t>> groups;
  for (auto l : latent_) groups[nodes_[l].original].push_back(l);
  std::vector<std::vector<std::size_t>> orders;
  for (auto& [orig, copies] : groups) orders.push_back(copies);
  auto current = orders;

  std::vector<std::vector<std::size_t>> result;
  std::vector<std::size_t> image(nodes_.size());
  for (;;) {
    std::iota(image.begin(), image.end(), 0);
    for (std::size_t g = 0; g < orders.size(); ++g) {
      for (std::size_t i = 0; i < orders[g].size(); ++i) image[orders[g][i]] = current[g][i];
    }
    std::vector<std::size_t> perm(observed_.size());
    std::vector<char> used(observed_.size(), 0);
    bool valid = true;
    for (std::size_t k = 0; k < observed_.size() && valid; ++k) {
      std::vector<std::size_t> mapped;
      for (auto p : parents_[k]) mapped.push_back(image[p]);
      std::sort(mapped.begin(), mapped.end());
      valid = false;
      for (std::size_t k2 = 0; k2 < observed_.size(); ++k2) {
        if (!used[k2] && nodes_[observed_[k2]].original == nodes_[observed_[k]].original && parents_[k2] == mapped) {
          perm[k] = k2;
          used[k2] = 1;
          valid = true;
          break;
        }
      }
    }
    if (valid && std::find(result.begin(), result.end(), perm) == result.end()) result.push_back(perm);

    // Next combination of per-group permutations (odometer).
    std::size_t g = 0;
    for (; g < current.size(); ++g) {
      if (std::next_permutation(current[g].begin(), current[g].end())) break;
    }
    if (g == current.size()) break;
  }
  return result;
}

InflationGraph build_inflation(const JointDag& joint, std::string_view preset, const InflationOptions& options) {
  std::vector<InflationNode> nodes;
  std::vector<Edge> edges;
  if (preset == "trivial" || preset == "carrot") {
    if (preset == "carrot" && joint.intervened.size() != 2) {
      inconsistent("the carrot preset needs a joint DAG with two intervened parties");
    }
    for (const auto& v : joint.network.observed()) nodes.push_back({v.name + "^0", v.name, NodeKind::Observed, "0"});
    for (const auto& l : joint.network.latent()) nodes.push_back({l + "^0", l, NodeKind::Latent, "0"});
    for (const auto& [from, to] : joint.network.edges()) edges.emplace_back(from + "^0", to + "^0");
    return InflationGraph(joint, std::move(nodes), std::move(edges));
  }
  if (preset == "rgb4-fig5") {
    const std::string hat = "hat(A)";
    const std::string hat_gamma = "hat(gamma->A)";
    nodes = {
        {"A^0", "A", NodeKind::Observed, "0"},          {hat + "^00", hat, NodeKind::Observed, "00"},
        {"B^0", "B", NodeKind::Observed, "0"},          {"C^0", "C", NodeKind::Observed, "0"},
        {"A^01", "A", NodeKind::Observed, "01"},        {hat + "^01", hat, NodeKind::Observed, "01"},
        {"C^10", "C", NodeKind::Observed, "10"},        {"alpha^0", "alpha", NodeKind::Latent, "0"},
        {"beta^0", "beta", NodeKind::Latent, "0"},      {"beta^1", "beta", NodeKind::Latent, "1"},
        {"gamma^0", "gamma", NodeKind::Latent, "0"},    {hat_gamma + "^0", hat_gamma, NodeKind::Latent, "0"},
    };
    const std::string second_hat = options.shared_hat_latent ? hat_gamma + "^0" : hat_gamma + "^1";
    if (!options.shared_hat_latent) nodes.push_back({hat_gamma + "^1", hat_gamma, NodeKind::Latent, "1"});
    edges = {
        {"beta^0", "A^0"},   {"gamma^0", "A^0"},          {"beta^0", hat + "^00"}, {hat_gamma + "^0", hat + "^00"},
        {"gamma^0", "B^0"},  {"alpha^0", "B^0"},          {"alpha^0", "C^0"},      {"beta^0", "C^0"},
        {"beta^1", "A^01"},  {"gamma^0", "A^01"},         {"beta^1", hat + "^01"}, {second_hat, hat + "^01"},
        {"alpha^0", "C^10"}, {"beta^1", "C^10"},
    };
    return InflationGraph(joint, std::move(nodes), std::move(edges));
  }
  inconsistent("unknown inflation preset " + std::string(preset));
}

InflationGraph inflation_from_json(const JointDag& joint, const nlohmann::json& doc) {
  try {
    std::vector<InflationNode> nodes;
    std::vector<Edge> edges;
    for (const auto& l : doc.at("latent")) {
      nodes.push_back({l.at("name").get<std::string>(), l.at("original").get<std::string>(), NodeKind::Latent,
                       l.value("copy", std::string{})});
    }
    for (const auto& o : doc.at("observed")) {
      const auto name = o.at("name").get<std::string>();
      nodes.push_back({name, o.at("original").get<std::string>(), NodeKind::Observed, o.value("copy", std::string{})});
      for (const auto& p : o.at("parents")) edges.emplace_back(p.get<std::string>(), name);
    }
    return InflationGraph(joint, std::move(nodes), std::move(edges));
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::ParseError, std::string("inflation wiring: ") + ex.what());
  }
}

namespace {

// Connected components of the set under shared latent parents.
std::vector<std::vector<std::size_t>> components(const InflationGraph& infl, const std::vector<std::size_t>& set) {
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<char> done(set.size(), 0);
  for (std::size_t s = 0; s < set.size(); ++s) {
    if (done[s]) continue;
    std::vector<std::size_t> block{set[s]};
    done[s] = 1;
    for (std::size_t head = 0; head < block.size(); ++head) {
      const auto& pa = infl.parents(block[head]);
      for (std::size_t t = 0; t < set.size(); ++t) {
        if (done[t]) continue;
        const auto& pb = infl.parents(set[t]);
        const bool shares = std::any_of(pa.begin(), pa.end(), [&](std::size_t p) {
          return std::find(pb.begin(), pb.end(), p) != pb.end();
        });
        if (shares) {
          done[t] = 1;
          block.push_back(set[t]);
        }
      }
    }
    std::sort(block.begin(), block.end());
    blocks.push_back(std::move(block));
  }
  return blocks;
}

bool injective_into(const InflationGraph& infl, const std::vector<std::size_t>& block, const KnownTable& table) {
  std::set<std::string> originals, latent_originals;
  std::set<std::size_t> latents;
  for (auto k : block) {
    const auto& orig = infl.nodes()[infl.observed()[k]].original;
    if (!table.variable_of.count(orig) || !originals.insert(orig).second) return false;
    for (auto p : infl.parents(k)) latents.insert(p);
  }
  for (auto l : latents) {
    if (!latent_originals.insert(infl.nodes()[l].original).second) return false;
  }
  return true;
}

}  // namespace

std::vector<InjectableSet> injectable_sets(const InflationGraph& infl, const std::vector<std::size_t>& allowed_tables,
                                           std::size_t max_size, bool maximal_only) {
  const std::size_t K = infl.observed().size();
  if (K > 24) throw Error(ErrorKind::PreconditionViolated, "too many inflated observed nodes to enumerate");
  const auto& tables = infl.joint().tables;

  std::vector<std::pair<std::uint32_t, InjectableSet>> found;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << K); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) > max_size) continue;
    InjectableSet s;
    for (std::size_t k = 0; k < K; ++k) {
      if (mask & (std::uint32_t{1} << k)) s.nodes.push_back(k);
    }
    bool known = true;
    for (auto& block : components(infl, s.nodes)) {
      std::size_t chosen = tables.size();
      for (auto t : allowed_tables) {
        if (injective_into(infl, block, tables[t])) {
          chosen = t;
          break;
        }
      }
      if (chosen == tables.size()) {
        known = false;
        break;
      }
      s.blocks.push_back({std::move(block), chosen});
    }
    if (known) found.emplace_back(mask, std::move(s));
  }

  std::vector<InjectableSet> out;
  for (auto& [mask, s] : found) {
    const bool dominated = maximal_only && std::any_of(found.begin(), found.end(), [&, m = mask](const auto& other) {
                             return other.first != m && (other.first & m) == m;
                           });
    if (!dominated) out.push_back(std::move(s));
  }
  return out;
}

LinearProgram build_lp(const InflationGraph& infl, const Knowns& knowns, const LpOptions& options) {
  const auto& joint = infl.joint();
  const auto& tables = joint.tables;
  const std::size_t K = infl.observed().size();

  // Resolve which tables are available and under which key.
  std::map<std::size_t, std::string> key_of;
  for (const auto& [key, behavior] : knowns) {
    const KnownTable* t = joint.find_table(key);
    if (!t) throw Error(ErrorKind::UnknownBehaviorReference, "no table " + key + " in the joint DAG");
    const auto index = static_cast<std::size_t>(t - tables.data());
    if (behavior.condition_count() != 1 || !behavior.conditions().empty()) {
      throw Error(ErrorKind::PreconditionViolated, "known table " + key + " must be unconditioned");
    }
    for (const auto& [node, var] : t->variable_of) {
      const auto pos = behavior.find_outcome(var);
      if (!pos || behavior.outcomes()[*pos].card != joint.network.observed_node(node).card) {
        throw Error(ErrorKind::CardinalityMismatch, "known table " + key + " lacks variable " + var +
                                                        " with the right cardinality");
      }
    }
    key_of.emplace(index, key);
  }
  if (!key_of.count(0)) throw Error(ErrorKind::UnknownBehaviorReference, "the observational table \"obs\" is required");
  std::vector<std::size_t> allowed;
  for (const auto& [index, key] : key_of) allowed.push_back(index);

  auto sets = injectable_sets(infl, allowed, options.max_set_size, options.maximal_sets_only);

  // Marginal rows of each table over its first copies.
  for (auto t : allowed) {
    std::vector<std::size_t> base;
    for (const auto& [node, var] : tables[t].variable_of) {
      for (std::size_t k = 0; k < K; ++k) {
        if (infl.nodes()[infl.observed()[k]].original == node) {
          base.push_back(k);
          break;
        }
      }
    }
    std::sort(base.begin(), base.end());
    if (base.size() != tables[t].variable_of.size() || !injective_into(infl, base, tables[t])) continue;
    const bool present = std::any_of(sets.begin(), sets.end(), [&](const InjectableSet& s) { return s.nodes == base; });
    if (!present) sets.push_back({base, {{base, t}}});
  }

  LinearProgram lp;
  for (std::size_t k = 0; k < K; ++k) lp.variables.push_back({infl.nodes()[infl.observed()[k]].name, infl.card(k)});
  const std::size_t N = tuple_count(lp.variables);
  std::vector<std::size_t> stride(K, 1);
  for (std::size_t k = K; k-- > 1;) stride[k - 1] = stride[k] * lp.variables[k].card;
  auto digit = [&](std::size_t x, std::size_t k) { return (x / stride[k]) % lp.variables[k].card; };

  // Columns: orbits of outcome tuples under the inflation symmetries.
  std::vector<std::size_t> column(N);
  if (options.symmetry) {
    const auto group = infl.symmetries();
    std::vector<std::size_t> rep(N);
    for (std::size_t x = 0; x < N; ++x) {
      std::size_t best = x;
      for (const auto& perm : group) {
        std::size_t y = 0;
        for (std::size_t k = 0; k < K; ++k) y += digit(x, k) * stride[perm[k]];
        best = std::min(best, y);
      }
      rep[x] = best;
    }
    std::map<std::size_t, std::size_t> id;
    for (std::size_t x = 0; x < N; ++x) {
      if (rep[x] == x) id.emplace(x, id.size());
    }
    lp.column_members.resize(id.size());
    for (std::size_t x = 0; x < N; ++x) {
      column[x] = id.at(rep[x]);
      lp.column_members[column[x]].push_back(x);
    }
    lp.num_columns = id.size();
  } else {
    std::iota(column.begin(), column.end(), 0);
    lp.num_columns = N;
  }

  // Normalization.
  {
    LpRow norm{"norm", {}, 1.0, {}};
    std::vector<double> count(lp.num_columns, 0.0);
    for (std::size_t x = 0; x < N; ++x) count[column[x]] += 1.0;
    for (std::size_t j = 0; j < lp.num_columns; ++j) norm.coeffs.emplace_back(j, count[j]);
    lp.rows.push_back(std::move(norm));
  }

  std::map<std::vector<std::pair<std::size_t, double>>, std::vector<std::size_t>> seen;
  seen[lp.rows[0].coeffs].push_back(0);

  for (const auto& set : sets) {
    std::vector<Variable> set_vars;
    for (auto k : set.nodes) set_vars.push_back(lp.variables[k]);
    const std::size_t events = tuple_count(set_vars);

    // Marginal table of every block, with block variables in block order.
    struct BlockData {
      std::vector<std::size_t> positions;  // positions of the block nodes within set.nodes
      std::vector<std::string> vars;
      Behavior marginal;
      std::string key;
    };
    std::vector<BlockData> blocks;
    for (const auto& blk : set.blocks) {
      BlockData bd;
      const auto& table = tables[blk.table];
      for (auto k : blk.nodes) {
        bd.positions.push_back(static_cast<std::size_t>(std::find(set.nodes.begin(), set.nodes.end(), k) - set.nodes.begin()));
        bd.vars.push_back(table.variable_of.at(infl.nodes()[infl.observed()[k]].original));
      }
      bd.key = key_of.at(blk.table);
      bd.marginal = knowns.at(bd.key).marginal(bd.vars);
      blocks.push_back(std::move(bd));
    }

    std::vector<std::vector<std::size_t>> members(events);
    for (std::size_t x = 0; x < N; ++x) {
      std::size_t e = 0;
      for (std::size_t i = 0; i < set.nodes.size(); ++i) e = e * set_vars[i].card + digit(x, set.nodes[i]);
      members[e].push_back(column[x]);
    }

    std::string set_name = "{";
    for (std::size_t i = 0; i < set.nodes.size(); ++i) set_name += (i ? "," : "") + set_vars[i].name;
    set_name += "}";

    for (std::size_t e = 0; e < events; ++e) {
      const auto values = decode_tuple(set_vars, e);
      LpRow row;
      std::ostringstream name;
      name << set_name << "=(";
      for (std::size_t i = 0; i < values.size(); ++i) name << (i ? "," : "") << values[i];
      name << ")";
      row.name = name.str();

      auto& cols = members[e];
      std::sort(cols.begin(), cols.end());
      for (std::size_t i = 0; i < cols.size();) {
        std::size_t j = i;
        while (j < cols.size() && cols[j] == cols[i]) ++j;
        row.coeffs.emplace_back(cols[i], static_cast<double>(j - i));
        i = j;
      }

      row.rhs = 1.0;
      for (const auto& bd : blocks) {
        std::vector<std::size_t> sub;
        EventAtom atom{bd.key, {}};
        for (std::size_t i = 0; i < bd.positions.size(); ++i) {
          sub.push_back(values[bd.positions[i]]);
          atom.event[bd.vars[i]] = {values[bd.positions[i]]};
        }
        row.rhs *= bd.marginal(sub);
        row.atoms.push_back(std::move(atom));
      }
      std::sort(row.atoms.begin(), row.atoms.end());

      auto& same = seen[row.coeffs];
      const bool duplicate = std::any_of(same.begin(), same.end(), [&](std::size_t r) {
        return std::abs(lp.rows[r].rhs - row.rhs) <= 1e-12;
      });
      if (duplicate) continue;
      same.push_back(lp.rows.size());
      lp.rows.push_back(std::move(row));
    }
  }
  return lp;
}

}  // namespace latentsplit

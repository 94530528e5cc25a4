#include "commands.hpp"

#include <cctype>
#include <charconv>
#include <chrono>
#include <iomanip>
#include <mutex>
#include <optional>
#include <sstream>

#include "latentsplit/certify.hpp"
#include "latentsplit/error.hpp"
#include "latentsplit/fritz.hpp"
#include "latentsplit/network_json.hpp"
#include "latentsplit/splitting.hpp"
#include "worker_pool.hpp"

namespace latentsplit::cli {

using nlohmann::json;

namespace {

/// Rows of named cells; emitted as CSV (round-trip precision) or JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;

  void write(std::ostream& out, const std::string& format, const std::string& command) const {
    if (format == "json") {
      json doc{{"command", command}, {"columns", columns}, {"rows", json::array()}};
      for (const auto& r : rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = r[i];
        doc["rows"].push_back(std::move(obj));
      }
      out << doc.dump(2) << '\n';
      return;
    }
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) out << ',';
        write_cell(out, r[i]);
      }
      out << '\n';
    }
  }

  static void write_cell(std::ostream& out, const json& v) {
    if (v.is_null()) return;
    if (v.is_number_float()) {
      // Shortest text that reads back to the same double.
      char buf[32];
      const auto res = std::to_chars(buf, buf + sizeof buf, v.get<double>());
      out << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    } else if (v.is_number()) {
      out << v.dump();
    } else if (v.is_boolean()) {
      out << (v.get<bool>() ? "true" : "false");
    } else {
      const auto s = v.get<std::string>();
      if (s.find_first_of(",\"\n") == std::string::npos) {
        out << s;
      } else {
        out << '"';
        for (char ch : s) out << (ch == '"' ? "\"\"" : std::string(1, ch));
        out << '"';
      }
    }
  }
};

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

const char* status_name(LpStatus s) { return s == LpStatus::Feasible ? "feasible" : "infeasible"; }

CertifyOptions certify_options(const RunConfig& cfg) {
  CertifyOptions o;
  o.preset = cfg.preset;
  o.inflation.shared_hat_latent = cfg.shared_hat_latent;
  o.lp.symmetry = !cfg.no_symmetry;
  o.solver.feasibility_tol = cfg.tol_lp;
  return o;
}

class Log {
 public:
  explicit Log(std::ostream& out) : out_(out) {}
  void line(const std::string& text) {
    std::lock_guard<std::mutex> lock(mutex_);
    out_ << text << '\n' << std::flush;
  }

 private:
  std::ostream& out_;
  std::mutex mutex_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string lower(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

std::string assignment(const std::vector<Variable>& vars, std::size_t index) {
  const auto values = decode_tuple(vars, index);
  std::string s;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) s += ';';
    s += lower(vars[i].name) + "=" + std::to_string(values[i]);
  }
  return s;
}

}  // namespace

int cmd_rgb4_scan(const RunConfig& cfg, std::ostream& out, std::ostream& log_stream) {
  const auto us = parse_grid(cfg.u_grid).points();
  Log log(log_stream);
  struct Row {
    std::string obs = "skipped", both = "skipped";
    std::optional<double> witness, reference;
    std::optional<bool> verified;
    std::string note;
    bool ambiguous = false;
  };
  std::vector<Row> rows(us.size());
  const auto base_options = certify_options(cfg);

  parallel_for(us.size(), cfg.jobs, [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    Rgb4Params p;
    p.u = us[i];
    p.v_alpha = p.v_beta = p.v_gamma = cfg.visibility;
    Row& row = rows[i];
    auto run = [&](bool obs_only, std::string& status) {
      auto o = base_options;
      o.obs_only = obs_only;
      try {
        const auto c = certify_rgb4(p, o);
        status = status_name(c.verdict.status);
        if (!obs_only && c.witness) {
          row.witness = c.witness_value;
          row.verified = verify_certificate(c.lp, c.verdict.certificate, o.solver.certificate_tol).valid;
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NumericallyAmbiguous) throw;
        status = "ambiguous";
        row.ambiguous = true;
        row.note += std::string(obs_only ? "obs-only: " : "obs+int: ") + e.what();
      }
    };
    run(true, row.obs);
    if (!cfg.obs_only) {
      run(false, row.both);
      row.reference = evaluate_witness(rgb4_reference_witness(), rgb4_knowns(p));
    }
    std::ostringstream msg;
    msg << "u=" << p.u << " obs-only " << row.obs << ", obs+int " << row.both << " (" << std::fixed
        << std::setprecision(1) << seconds_since(t0) << " s)";
    log.line(msg.str());
  });

  Table t{{"u", "status_obs_only", "status_obs_plus_int", "witness_value", "reference_witness_value",
           "certificate_verified", "note"},
          {}};
  bool ambiguous = false;
  for (std::size_t i = 0; i < us.size(); ++i) {
    const auto& r = rows[i];
    ambiguous = ambiguous || r.ambiguous;
    t.rows.push_back({us[i], r.obs, r.both, optional_number(r.witness), optional_number(r.reference),
                      r.verified ? json(*r.verified) : json(nullptr), r.note});
  }
  t.write(out, cfg.format, cfg.command);
  return ambiguous ? kAmbiguous : kClean;
}

int cmd_rgb4_noise(const RunConfig& cfg, std::ostream& out, std::ostream& log_stream) {
  struct Case {
    const char* name;
    std::vector<Source> free;
  };
  const std::vector<Case> cases{{"symmetric", {Source::Alpha, Source::Beta, Source::Gamma}},
                                {"alpha", {Source::Alpha}},
                                {"gamma", {Source::Gamma}},
                                {"beta", {Source::Beta}}};
  const auto [lo, hi] = parse_range(cfg.v_range);
  Log log(log_stream);

  struct Outcome {
    std::optional<ThresholdResult> result;
    std::string failure;  // NoTransition message
  };
  std::vector<Outcome> outcomes(cases.size());
  parallel_for(cases.size(), cfg.jobs, [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    Rgb4Params base;
    base.u = cfg.u;
    base.v_alpha = base.v_beta = base.v_gamma = cfg.visibility;
    ThresholdOptions o;
    o.lo = lo;
    o.hi = hi;
    o.step = cfg.tol_bisect;
    o.certify = certify_options(cfg);
    std::ostringstream msg;
    msg << cases[i].name << ": ";
    try {
      outcomes[i].result = visibility_threshold(base, cases[i].free, true, o);
      const auto& r = *outcomes[i].result;
      if (r.ambiguous) msg << r.note;
      else msg << "critical v = " << std::setprecision(6) << r.critical;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoTransition) throw;
      outcomes[i].failure = e.what();
      msg << e.what();
    }
    msg << " (" << std::fixed << std::setprecision(1) << seconds_since(t0) << " s)";
    log.line(msg.str());
  });

  Table t{{"case", "kind", "v", "status", "certificate_verified", "note"}, {}};
  bool ambiguous = false;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& o = outcomes[i];
    if (!o.result) {
      t.rows.push_back({cases[i].name, "no_transition", nullptr, nullptr, nullptr, o.failure});
      continue;
    }
    for (const auto& p : o.result->trace) {
      t.rows.push_back({cases[i].name, "probe", p.v, status_name(p.status),
                        p.status == LpStatus::Infeasible ? json(p.certificate_verified) : json(nullptr), ""});
    }
    if (o.result->ambiguous) {
      ambiguous = true;
      t.rows.push_back({cases[i].name, "ambiguous", nullptr, nullptr, nullptr, o.result->note});
    } else {
      t.rows.push_back({cases[i].name, "threshold", o.result->critical, nullptr, nullptr, ""});
    }
  }
  t.write(out, cfg.format, cfg.command);
  return ambiguous ? kAmbiguous : kClean;
}

int cmd_fritz_scan(const RunConfig& cfg, std::ostream& out, std::ostream& log_stream) {
  const auto eps = parse_grid(cfg.eps_grid).points();
  Log log(log_stream);
  struct Row {
    double table = 0.0, closed = 0.0, vmin = 0.0;
    std::optional<SanityReport> sanity;
  };
  std::vector<Row> rows(eps.size());
  parallel_for(eps.size(), cfg.jobs, [&](std::size_t i) {
    Row& r = rows[i];
    r.table = evaluate_S(correlators(fritz_tables({eps[i], cfg.visibility})));
    r.closed = closed_form_SQ(eps[i], cfg.visibility);
    r.vmin = v_min(eps[i]);
    if (cfg.sanity > 0) {
      r.sanity = classical_sanity(eps[i], cfg.sanity, cfg.seed);
      if (r.sanity->counterexamples > 0) {
        std::ostringstream msg;
        msg << "epsilon=" << eps[i] << ": " << r.sanity->counterexamples << " classical samples violate S >= 0";
        log.line(msg.str());
      }
    }
  });

  Table t{{"epsilon", "S_table_pipeline", "S_closed_form", "violated", "v_min"}, {}};
  if (cfg.sanity > 0) {
    for (const char* c : {"sanity_samples", "sanity_min_S", "sanity_counterexamples", "sanity_argmin_digest"}) {
      t.columns.push_back(c);
    }
  }
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const auto& r = rows[i];
    std::vector<json> cells{eps[i], r.table, r.closed, r.table < 0.0, r.vmin};
    if (r.sanity) {
      cells.push_back(r.sanity->samples);
      cells.push_back(optional_number(r.sanity->min_S));
      cells.push_back(r.sanity->counterexamples);
      cells.push_back(r.sanity->argmin_model_digest);
    }
    t.rows.push_back(std::move(cells));
  }
  t.write(out, cfg.format, cfg.command);
  std::ostringstream msg;
  msg << "sign change of S_Q at v=1: epsilon = " << std::setprecision(10) << epsilon_threshold(1.0);
  log.line(msg.str());
  return kClean;
}

int cmd_do_demo(const RunConfig& cfg, std::ostream& out, std::ostream& log_stream) {
  Log log(log_stream);
  std::vector<std::pair<std::string, QuantumStrategy>> scenarios;
  if (!cfg.strategy.empty()) {
    scenarios.emplace_back("custom", strategy_from_json(read_json_file(cfg.strategy)));
  } else {
    const bool all = cfg.scenario == "all";
    if (all || cfg.scenario == "instrumental") scenarios.emplace_back("instrumental", instrumental_strategy(cfg.visibility));
    if (all || cfg.scenario == "uc") scenarios.emplace_back("uc", uc_strategy(cfg.visibility));
    if (all || cfg.scenario == "triangle") {
      Rgb4Params p;
      p.u = cfg.u;
      p.v_alpha = p.v_beta = p.v_gamma = cfg.visibility;
      scenarios.emplace_back("triangle", rgb4_strategy(p));
    }
    if (scenarios.empty()) throw Error(ErrorKind::ParseError, "unknown scenario '" + cfg.scenario + "'");
  }

  Table t{{"scenario", "target", "table", "outcome", "condition", "p"}, {}};
  auto emit = [&](const std::string& scenario, const std::string& target, const char* name, const Behavior& b) {
    for (std::size_t c = 0; c < b.condition_count(); ++c) {
      const auto cond = assignment(b.conditions(), c);
      for (std::size_t o = 0; o < b.outcome_count(); ++o) {
        t.rows.push_back({scenario, target, name, assignment(b.outcomes(), o), cond, b.at(o, c)});
      }
    }
  };

  bool flagged = false;
  for (const auto& [name, s] : scenarios) {
    emit(name, "", "obs", quantum_behavior(s));
    for (const auto& party : s.network.parties()) {
      const std::string target = lower(party.name);
      emit(name, target, "int", interventional_behavior(s, full_split(s.network, party.name)));
      try {
        const auto recovered = recover_do(s, party.name);
        emit(name, target, "do", recovered);
        const double residual = recovered.max_abs_difference(pearl_do_quantum(s, party.name));
        t.rows.push_back({name, target, "residual", "", "", residual});
        std::ostringstream msg;
        msg << name << " do(" << target << "): residual " << std::setprecision(3) << residual;
        log.line(msg.str());
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::ZeroDivisor) throw;
        flagged = true;
        t.rows.push_back({name, target, "error", e.what(), "", nullptr});
        log.line(name + " do(" + target + "): " + e.what());
      }
    }
  }
  t.write(out, cfg.format, cfg.command);
  return flagged ? kAmbiguous : kClean;
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  cfg.validate();
  if (cfg.command == "rgb4-scan") return cmd_rgb4_scan(cfg, out, log);
  if (cfg.command == "rgb4-noise") return cmd_rgb4_noise(cfg, out, log);
  if (cfg.command == "fritz-scan") return cmd_fritz_scan(cfg, out, log);
  return cmd_do_demo(cfg, out, log);
}

}  // namespace latentsplit::cli

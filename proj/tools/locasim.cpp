// locasim: command line front end for the locasim library.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "locasim/locasim.hpp"
#include "render.hpp"

using json = nlohmann::json;
using namespace locasim;

namespace {

enum Exit : int {
  kOk = 0,
  kVerifyFailed = 1,
  kUsage = 2,
  kFault = 3,
  kNodeBudget = 4,
  kMemoryBudget = 5,
};

AutomatonSpec read_ca(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return parse_ca(ss.str(), "<stdin>");
  }
  return load_ca(path);
}

std::size_t default_workers() {
  if (const char* env = std::getenv("LOCASIM_WORKERS")) {
    try {
      const auto v = std::stoul(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
    std::cerr << "ignoring LOCASIM_WORKERS=" << env << "\n";
  }
  return 1;
}

void print_record(const json& j) { std::cout << j.dump() << "\n"; }

json violations_json(const std::vector<Violation>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back({{"rule", v.rule}, {"witness", v.witness}, {"message", v.message}});
  return a;
}

json compliance_json(const ComplianceReport& rep) {
  json c = json::array();
  for (std::size_t i = 0; i < rep.conditions.size(); ++i) {
    c.push_back({{"condition", i}, {"pass", rep.conditions[i].pass},
                 {"witnesses", rep.conditions[i].witnesses}});
  }
  return {{"pass", rep.pass}, {"conditions", c}};
}

void report_compliance(const ComplianceReport& rep) {
  for (std::size_t i = 0; i < rep.conditions.size(); ++i) {
    const auto& c = rep.conditions[i];
    std::cerr << "condition (" << i << "): " << (c.pass ? "ok" : "FAIL") << "\n";
    for (std::size_t k = 0; k < c.witnesses.size() && k < 5; ++k) std::cerr << "  " << c.witnesses[k] << "\n";
  }
}

json conflicts_json(const DeterminismReport& det, const Alphabet& a) {
  json arr = json::array();
  for (const auto& c : det.conflicts) {
    json rs = json::array();
    for (StateId r : c.results) rs.push_back(a.name(r));
    arr.push_back({{"triple", format_triple(a, c.triple)}, {"results", rs}});
  }
  return arr;
}

json solution_json(const Solution& s) {
  json j{{"index", s.index},
         {"states", count_states(s.ca)},
         {"used_states", s.used_states},
         {"transitions", s.transitions},
         {"ca", format_ca(canonical_form(s.ca))}};
  j["parent"] = s.parent ? json(*s.parent) : json(nullptr);
  return j;
}

json stats_json(const ExplorationStats& st) {
  json h = json::object();
  for (const auto& [k, v] : st.histogram) h[std::to_string(k)] = v;
  json growth = json::array();
  for (const auto& [a, b] : st.visited_growth) growth.push_back({a, b});
  json best_hist = json::array();
  for (const auto& [a, b] : st.best_history) best_hist.push_back({a, b});
  return {{"record", "stats"},
          {"stop", to_string(st.stop)},
          {"nodes_expanded", st.nodes_expanded},
          {"candidates_tested", st.candidates_tested},
          {"admitted_raw", st.admitted_raw},
          {"distinct", st.distinct},
          {"histogram", h},
          {"histogram_total", histogram_total(st.histogram)},
          {"best_transitions", st.best_transitions ? json(*st.best_transitions) : json(nullptr)},
          {"best_history", best_hist},
          {"small_state_solutions", st.small_state_solutions},
          {"verification_failures", st.verification_failures},
          {"incremental_mismatches", st.incremental_mismatches},
          {"visited_growth", growth}};
}

struct Common {
  std::size_t workers = 0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial-table cellular automata: RTSG verification, local simulations, exploration"};
  app.fallthrough();
  app.require_subcommand(1);
  Common common;
  app.add_option("--workers", common.workers, "Worker threads (default: LOCASIM_WORKERS or 1)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Render a space-time diagram");
  std::string sim_ca, sim_glyphs, sim_format = "text", sim_out;
  std::size_t sim_T = 70;
  unsigned sim_cell = 4;
  sim->add_option("--ca", sim_ca, "CA file ('-' for stdin)")->required();
  sim->add_option("--horizon,-T", sim_T, "Last time step");
  sim->add_option("--format", sim_format, "text or ppm")->check(CLI::IsMember({"text", "ppm"}));
  sim->add_option("--glyphs", sim_glyphs, "NAME=C,... glyph overrides for text output");
  sim->add_option("--cell", sim_cell, "Cell size in pixels for ppm output");
  sim->add_option("--out,-o", sim_out, "Output file (default stdout)");

  // verify
  auto* ver = app.add_subcommand("verify", "Check candidacy and verify a sequence up to a horizon");
  std::string ver_ca, ver_seq = "cube";
  std::size_t ver_T = 130;
  ver->add_option("--ca", ver_ca, "CA file ('-' for stdin)")->required();
  ver->add_option("--seq", ver_seq, "Sequence: cube, square, pow2, linear:A,B, list:...");
  ver->add_option("--horizon,-T", ver_T, "Verification horizon");

  // handcraft
  auto* hc = app.add_subcommand("handcraft", "Apply the A->D/E recoding and a patch to a 6-state seed");
  std::string hc_ca, hc_patch, hc_map_out, hc_ca_out, hc_seq = "cube";
  std::size_t hc_T = 130, hc_tmax = 400, hc_w = 100;
  hc->add_option("--ca", hc_ca, "Seed CA file")->required();
  hc->add_option("--patch", hc_patch, "Mapping patch file");
  hc->add_option("--out-mapping", hc_map_out, "Write the mapping here");
  hc->add_option("--out-ca", hc_ca_out, "Write the simulated CA here");
  hc->add_option("--seq", hc_seq, "Sequence for the final verification");
  hc->add_option("--horizon,-T", hc_T, "Verification horizon");
  hc->add_option("--super-horizon", hc_tmax, "Rows harvested for super-local transitions");
  hc->add_option("--window", hc_w, "Saturation window");

  // collect-supers
  auto* cs = app.add_subcommand("collect-supers", "Harvest super-local transitions");
  std::string cs_ca, cs_out;
  std::size_t cs_tmax = 400, cs_w = 100;
  cs->add_option("--ca", cs_ca, "CA file")->required();
  cs->add_option("--horizon,-T", cs_tmax, "T_max");
  cs->add_option("--window", cs_w, "Saturation window W");
  cs->add_option("--out,-o", cs_out, "Write one record per quintuple here");

  // map-apply
  auto* ma = app.add_subcommand("map-apply", "Check a mapping and build its simulated CA");
  std::string ma_ca, ma_map, ma_patch, ma_out, ma_seq = "cube";
  std::size_t ma_T = 130, ma_tmax = 400, ma_w = 100;
  ma->add_option("--ca", ma_ca, "Source CA file")->required();
  ma->add_option("--mapping", ma_map, "Mapping file (default: identity)");
  ma->add_option("--patch", ma_patch, "Patch applied on top of the mapping");
  ma->add_option("--out-ca", ma_out, "Write the simulated CA here");
  ma->add_option("--seq", ma_seq, "Sequence for the final verification");
  ma->add_option("--horizon,-T", ma_T, "Verification horizon");
  ma->add_option("--super-horizon", ma_tmax, "Rows harvested for super-local transitions");
  ma->add_option("--window", ma_w, "Saturation window");

  // explore
  auto* ex = app.add_subcommand("explore", "Breadth-first search over compliant local simulations");
  std::string ex_ca, ex_seq = "cube", ex_out, ex_cp, ex_resume, ex_stats;
  std::size_t ex_states = 0, ex_k = 0, ex_budget = 100000, ex_T = 130, ex_tmax = 400, ex_w = 100,
              ex_cp_every = 0;
  std::size_t ex_mem = std::size_t{1} << 30;
  std::uint64_t ex_seed = 1;
  bool ex_test = false, ex_admit_first = false;
  ex->add_option("--ca", ex_ca, "Seed CA file (not needed with --resume)");
  ex->add_option("--seq", ex_seq, "Sequence the solutions must generate");
  ex->add_option("--states", ex_states, "Non-outside target states (default: seed's)");
  ex->add_option("--k", ex_k, "Extra random modifications per neighbor");
  ex->add_option("--budget-nodes", ex_budget, "Stop after this many distinct solutions");
  ex->add_option("--budget-mem", ex_mem, "Visited-set budget in bytes");
  ex->add_option("--rng-seed", ex_seed, "Random seed");
  ex->add_option("--horizon,-T", ex_T, "Verification horizon in test mode");
  ex->add_option("--super-horizon", ex_tmax, "Rows harvested for super-local transitions");
  ex->add_option("--window", ex_w, "Saturation window");
  ex->add_option("--out,-o", ex_out, "Solutions as ndjson (default stdout)");
  ex->add_option("--checkpoint", ex_cp, "Checkpoint file written at stop");
  ex->add_option("--checkpoint-every", ex_cp_every, "Also checkpoint every N expansions");
  ex->add_option("--resume", ex_resume, "Continue from a checkpoint");
  ex->add_option("--stats-out", ex_stats, "Write the stats record here (default stderr)");
  ex->add_flag("--test-mode", ex_test, "Re-verify every emission and cross-check admission");
  ex->add_flag("--admit-before-modify", ex_admit_first, "Test single neighbors before the k extra changes");

  // enumerate
  auto* en = app.add_subcommand("enumerate", "Enumerate tiny RTSG candidates and classify their output");
  std::size_t en_states = 2, en_T = 64;
  std::string en_out;
  bool en_big = false;
  bool en_free_edge = false;
  en->add_option("--states", en_states, "Non-outside states");
  en->add_option("--horizon,-T", en_T, "Horizon");
  en->add_option("--out,-o", en_out, "Catalog as ndjson (default stdout)");
  en->add_flag("--big", en_big, "Allow 3 or more states");
  en->add_flag("--free-edge", en_free_edge, "Do not pin (*,Q,Q)->Q");

  // stats
  auto* stc = app.add_subcommand("stats", "Histogram of solutions or of a histogram file");
  std::string st_in, st_hist;
  stc->add_option("--in", st_in, "Solutions ndjson ('-' for stdin)");
  stc->add_option("--histogram", st_hist, "Histogram file with 'transitions: count' lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  const std::size_t workers = common.workers ? common.workers : default_workers();

  try {
    if (*sim) {
      const AutomatonSpec ca = read_ca(sim_ca);
      const DiagramWindow w = run_diagram(ca, sim_T);
      std::string out;
      if (sim_format == "text") {
        out = tools::render_text(w, ca.alphabet, tools::resolve_glyphs(ca.alphabet, sim_glyphs));
      } else {
        out = tools::render_ppm(w, ca.alphabet, sim_cell);
      }
      if (sim_out.empty()) {
        std::cout << out;
      } else {
        detail::write_file(sim_out, out);
      }
      return kOk;
    }

    if (*ver) {
      const AutomatonSpec ca = read_ca(ver_ca);
      const SequenceSpec seq = parse_sequence(ver_seq);
      const CandidacyReport cand = check_candidate(ca);
      SolutionReport sol;
      if (cand.pass) sol = verify_solution(ca, seq, ver_T);
      const bool pass = cand.pass && sol.pass;
      std::cerr << "candidate: " << (cand.pass ? "ok" : "FAIL") << "\n";
      for (const auto& v : cand.violations) std::cerr << "  rule " << v.rule << ": " << v.witness << "\n";
      if (cand.pass) {
        std::cerr << "sequence " << seq.name() << " at column p=1, verified to horizon " << ver_T
                  << ": " << (sol.pass ? "ok" : "FAIL") << "\n";
        for (std::size_t i = 0; i < sol.violations.size() && i < 10; ++i) {
          std::cerr << "  " << sol.violations[i].witness << " " << sol.violations[i].message << "\n";
        }
      }
      print_record({{"record", "verify"},
                    {"pass", pass},
                    {"states", count_states(ca)},
                    {"transitions", count_transitions(ca)},
                    {"candidate", {{"pass", cand.pass}, {"violations", violations_json(cand.violations)}}},
                    {"sequence", seq.name()},
                    {"checked_horizon", ver_T},
                    {"checked_column", sol.checked_column},
                    {"first_checked_time", sol.first_checked_time},
                    {"generator_times", sol.generator_times},
                    {"mismatch_times", sol.mismatch_times},
                    {"violations", violations_json(sol.violations)}});
      return pass ? kOk : kVerifyFailed;
    }

    auto finish_mapping = [&](const LocalMapping& m, std::size_t tmax, std::size_t win,
                              const std::string& seq_name, std::size_t T, const std::string& map_out,
                              const std::string& ca_out, const char* record) {
      const SequenceSpec seq = parse_sequence(seq_name);
      const SuperTransitionSet sup = collect_supers(m.source(), tmax, win);
      if (!sup.saturated()) {
        std::cerr << "warning: super-local transitions not saturated (last new row " << sup.saturated_at
                  << " of " << tmax << ")\n";
      }
      const ComplianceReport comp = check_compliance(m);
      const DeterminismReport det = is_local_simulation(m, sup);
      report_compliance(comp);
      std::cerr << "local simulation: " << (det.deterministic ? "ok" : "FAIL") << " ("
                << det.conflicts.size() << " conflicts)\n";
      if (!map_out.empty()) save_mapping(m, map_out);
      json rec{{"record", record},
               {"compliance", compliance_json(comp)},
               {"deterministic", det.deterministic},
               {"conflicts", conflicts_json(det, m.targets())},
               {"saturated", sup.saturated()}};
      bool pass = comp.pass && det.deterministic;
      if (pass) {
        const AutomatonSpec out = build_simulated_ca(m, sup);
        const SolutionReport sol = verify_solution(out, seq, T);
        rec["states"] = count_states(out);
        rec["transitions"] = count_transitions(out);
        rec["verified"] = sol.pass;
        rec["generator_times"] = sol.generator_times;
        std::cerr << "simulated CA: " << count_states(out) << " states, " << count_transitions(out)
                  << " transitions; " << seq.name() << " to horizon " << T << ": "
                  << (sol.pass ? "ok" : "FAIL") << "\n";
        if (!ca_out.empty()) save_ca(out, ca_out);
        pass = sol.pass;
      }
      rec["pass"] = pass;
      print_record(rec);
      return pass ? kOk : kVerifyFailed;
    };

    if (*hc) {
      const AutomatonSpec seed = read_ca(hc_ca);
      LocalMapping m = handcraft_script(seed);
      if (!hc_patch.empty()) apply_patch(m, load_patch(hc_patch, m));
      return finish_mapping(m, hc_tmax, hc_w, hc_seq, hc_T, hc_map_out, hc_ca_out, "handcraft");
    }

    if (*ma) {
      const AutomatonSpec src = read_ca(ma_ca);
      LocalMapping m = ma_map.empty() ? identity_mapping(src) : load_mapping(ma_map, src);
      if (!ma_patch.empty()) apply_patch(m, load_patch(ma_patch, m));
      return finish_mapping(m, ma_tmax, ma_w, ma_seq, ma_T, {}, ma_out, "map-apply");
    }

    if (*cs) {
      const AutomatonSpec ca = read_ca(cs_ca);
      const SuperTransitionSet sup = collect_supers(ca, cs_tmax, cs_w);
      if (!cs_out.empty()) {
        std::ofstream f(cs_out, std::ios::binary | std::ios::trunc);
        const Alphabet& a = ca.alphabet;
        for (const Triple& t : sup.initial_triples) {
          f << json{{"initial", format_triple(a, t)}}.dump() << "\n";
        }
        for (const SuperRecord& r : sup.quints) {
          std::string q;
          for (std::size_t i = 0; i < 5; ++i) q += (i ? " " : "") + a.name(r.q[i]);
          f << json{{"quint", q}, {"result", format_triple(a, r.result())}}.dump() << "\n";
        }
        if (!f) throw std::runtime_error("cannot write " + cs_out);
      }
      print_record({{"record", "supers"},
                    {"initial_triples", sup.initial_triples.size()},
                    {"quints", sup.quints.size()},
                    {"saturated_at", sup.saturated_at},
                    {"horizon", sup.horizon},
                    {"window", sup.window},
                    {"saturated", sup.saturated()}});
      return kOk;
    }

    if (*ex) {
      ExplorationConfig cfg;
      cfg.node_budget = ex_budget;
      cfg.memory_budget = ex_mem;
      cfg.workers = workers;
      cfg.test_mode = ex_test;
      cfg.checkpoint_every = ex_cp_every;
      if (!ex_cp.empty()) cfg.checkpoint_path = ex_cp;
      if (ex_resume.empty()) {
        if (ex_ca.empty()) throw CLI::RequiredError("--ca");
        cfg.seed = read_ca(ex_ca);
        cfg.sequence = parse_sequence(ex_seq);
        cfg.states = ex_states;
        cfg.k = ex_k;
        cfg.rng_seed = ex_seed;
        cfg.verify_horizon = ex_T;
        cfg.super_horizon = ex_tmax;
        cfg.super_window = ex_w;
        cfg.admit_before_modify = ex_admit_first;
      }
      std::ofstream file;
      if (!ex_out.empty()) {
        file.open(ex_out, std::ios::binary | std::ios::trunc);
        if (!file) throw std::runtime_error("cannot write " + ex_out);
      }
      std::ostream& out = ex_out.empty() ? std::cout : file;
      auto sink = [&](const Solution& s) { out << solution_json(s).dump() << "\n"; };
      const ExplorationStats st = ex_resume.empty() ? explore(cfg, sink) : resume(ex_resume, cfg, sink);
      out.flush();
      const std::string stats = stats_json(st).dump();
      if (ex_stats.empty()) {
        std::cerr << stats << "\n";
      } else {
        detail::write_file(ex_stats, stats + "\n");
      }
      if (st.verification_failures || st.incremental_mismatches) return kVerifyFailed;
      switch (st.stop) {
        case StopReason::frontier_exhausted: return kOk;
        case StopReason::node_budget: return kNodeBudget;
        case StopReason::memory_budget: return kMemoryBudget;
      }
      return kOk;
    }

    if (*en) {
      EnumerationSpace space{en_states, en_T, en_big, !en_free_edge};
      std::ofstream file;
      if (!en_out.empty()) {
        file.open(en_out, std::ios::binary | std::ios::trunc);
        if (!file) throw std::runtime_error("cannot write " + en_out);
      }
      std::ostream& out = en_out.empty() ? std::cout : file;
      std::uint64_t n = 0, unmatched = 0;
      enumerate_candidates(space, [&](const AutomatonSpec& ca) {
        const auto prefix = generated_prefix(ca, en_T);
        const auto matches = classify_prefix(prefix);
        json fams = json::array();
        for (const auto& m : matches) fams.push_back(m.name());
        if (matches.empty()) ++unmatched;
        const Alphabet& a = ca.alphabet;
        out << json{{"index", n++},
                    {"roles", {{"boundary", a.name(ca.boundary)},
                               {"quiescent", a.name(ca.quiescent)},
                               {"generator", a.name(ca.generator)}}},
                    {"ca", format_ca(ca)},
                    {"prefix", prefix_hex(prefix)},
                    {"families", matches.empty() ? json::array({"unmatched"}) : fams}}
                   .dump()
            << "\n";
        return true;
      });
      std::cerr << n << " candidates, " << unmatched << " unmatched\n";
      return kOk;
    }

    if (*stc) {
      std::map<std::size_t, std::uint64_t> hist;
      std::optional<std::size_t> best;
      std::uint64_t records = 0;
      if (!st_hist.empty()) {
        hist = parse_histogram(detail::read_file(st_hist));
      } else if (!st_in.empty()) {
        std::ifstream file;
        if (st_in != "-") {
          file.open(st_in);
          if (!file) throw std::runtime_error("cannot open " + st_in);
        }
        std::istream& in = st_in == "-" ? std::cin : file;
        std::vector<AutomatonSpec> sols;
        std::string line;
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          const json j = json::parse(line);
          if (!j.contains("ca")) continue;
          sols.push_back(parse_ca(j.at("ca").get<std::string>(), "record " + std::to_string(records)));
          ++records;
        }
        const ExplorationStats st = stats_report(sols);
        hist = st.histogram;
        best = st.best_transitions;
      } else {
        throw CLI::RequiredError("--in or --histogram");
      }
      if (!best && !hist.empty()) best = hist.begin()->first;
      json h = json::object();
      for (const auto& [k, v] : hist) h[std::to_string(k)] = v;
      print_record({{"record", "stats"},
                    {"histogram", h},
                    {"total", histogram_total(hist)},
                    {"best_transitions", best ? json(*best) : json(nullptr)}});
      return kOk;
    }
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFault;
  }
  return kOk;
}

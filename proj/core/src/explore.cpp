#include "locasim/explore.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "checkpoint_io.hpp"
#include "locasim/ca_io.hpp"
#include "locasim/errors.hpp"

namespace locasim {

namespace {

constexpr std::uint8_t kNone = 0xFF;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct Roles {
  std::size_t n = 0;
  std::uint8_t outside = 0, boundary = 0, quiescent = 0, generator = 0;
};

// Non-role states, permuted; roles map to themselves.
std::vector<std::vector<std::uint8_t>> role_fixing_permutations(const Roles& r) {
  std::vector<std::uint8_t> free;
  for (std::size_t s = 0; s < r.n; ++s) {
    const auto u = static_cast<std::uint8_t>(s);
    if (u != r.outside && u != r.boundary && u != r.quiescent && u != r.generator) free.push_back(u);
  }
  if (free.size() > 8) throw std::invalid_argument("too many free states for canonical keys");
  std::vector<std::vector<std::uint8_t>> out;
  std::vector<std::uint8_t> img = free;
  do {
    std::vector<std::uint8_t> perm(r.n);
    std::iota(perm.begin(), perm.end(), std::uint8_t{0});
    for (std::size_t i = 0; i < free.size(); ++i) perm[free[i]] = img[i];
    out.push_back(std::move(perm));
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

// Header bytes (size and roles) then one byte per triple slot.
CanonicalKey key_from_dense(const std::vector<std::uint8_t>& dense, const Roles& r,
                            const std::vector<std::vector<std::uint8_t>>& perms) {
  const std::size_t n = r.n;
  std::string best;
  std::string cur(4 + dense.size(), '\0');
  cur[0] = static_cast<char>(n);
  cur[1] = static_cast<char>(r.boundary);
  cur[2] = static_cast<char>(r.quiescent);
  cur[3] = static_cast<char>(r.generator);
  for (const auto& pi : perms) {
    for (std::size_t s = 0; s < dense.size(); ++s) {
      const std::size_t a = s / (n * n), b = (s / n) % n, c = s % n;
      const std::size_t d = (pi[a] * n + pi[b]) * n + pi[c];
      const std::uint8_t v = dense[s];
      cur[4 + d] = static_cast<char>(v == kNone ? kNone : pi[v]);
    }
    if (best.empty() || cur < best) best = cur;
  }
  return best;
}

Roles roles_of(const AutomatonSpec& ca) {
  return {ca.alphabet.size(), static_cast<std::uint8_t>(index(ca.outside())),
          static_cast<std::uint8_t>(index(ca.boundary)), static_cast<std::uint8_t>(index(ca.quiescent)),
          static_cast<std::uint8_t>(index(ca.generator))};
}

std::vector<std::uint8_t> dense_of(const StateTable& t) {
  const std::size_t n = t.alphabet_size();
  std::vector<std::uint8_t> d(n * n * n, kNone);
  for (const auto& [tr, r] : t.entries()) {
    d[(index(tr.left) * n + index(tr.mid)) * n + index(tr.right)] = static_cast<std::uint8_t>(index(r));
  }
  return d;
}

std::size_t used_states(const AutomatonSpec& ca) {
  std::vector<bool> used(ca.alphabet.size(), false);
  for (const auto& [t, r] : ca.table.entries()) {
    used[index(t.left)] = used[index(t.mid)] = used[index(t.right)] = used[index(r)] = true;
  }
  used[index(ca.outside())] = false;
  return static_cast<std::size_t>(std::count(used.begin(), used.end(), true));
}

// Induced relation rows as references into the ls value vector.
// A reference r >= 0 is an entry index; r < 0 is the constant target state -r-1.
struct Record {
  std::int32_t ref[4];  // three key components, then the result
};

struct Problem {
  LocalMapping base;
  SuperTransitionSet sup;
  Roles roles;
  std::size_t nx = 0;
  std::vector<Record> records;
  std::vector<std::vector<std::uint32_t>> by_entry;
  std::vector<std::vector<std::uint8_t>> allowed;  // per entry, empty when immutable
  std::vector<std::uint32_t> mutable_entries;
  std::vector<std::vector<std::uint8_t>> perms;
};

std::int32_t const_ref(StateId s) { return -static_cast<std::int32_t>(index(s)) - 1; }

Problem make_problem(const ExplorationConfig& cfg) {
  Problem pb;
  const AutomatonSpec& seed = cfg.seed;
  const std::size_t seed_states = count_states(seed);
  const std::size_t want = cfg.states == 0 ? seed_states : cfg.states;
  if (want < seed_states) {
    throw std::invalid_argument("target state count below the seed's state count");
  }
  std::vector<std::string> names;
  for (StateId s : seed.alphabet.inner_states()) names.push_back(seed.alphabet.name(s));
  for (std::size_t i = seed_states; i < want; ++i) names.push_back("X" + std::to_string(i - seed_states + 1));
  names.emplace_back(Alphabet::kOutsideName);
  Alphabet targets(std::move(names));
  auto tgt = [&](StateId s) { return *targets.find(seed.alphabet.name(s)); };

  pb.base = LocalMapping(seed, targets, tgt(seed.boundary), tgt(seed.quiescent), tgt(seed.generator));
  for (StateId s : pb.base.zmap_domain()) pb.base.set_zmap(s, tgt(s));
  for (std::size_t e = 0; e < pb.base.domain_size(); ++e) {
    pb.base.set_value(e, tgt(*seed.table.find(pb.base.domain()[e])));
  }

  if (!verify_solution(seed, cfg.sequence, cfg.verify_horizon).pass) {
    throw std::invalid_argument("seed does not generate " + cfg.sequence.name());
  }
  const ComplianceReport comp = check_compliance(pb.base);
  if (!comp.pass) throw NonCompliant("identity mapping of the seed is not RTSG-compliant");
  pb.sup = collect_supers(seed, cfg.super_horizon, cfg.super_window);

  pb.nx = targets.size();
  pb.roles = {pb.nx, static_cast<std::uint8_t>(index(targets.outside())),
              static_cast<std::uint8_t>(index(pb.base.target_boundary())),
              static_cast<std::uint8_t>(index(pb.base.target_quiescent())),
              static_cast<std::uint8_t>(index(pb.base.target_generator()))};
  pb.perms = role_fixing_permutations(pb.roles);

  auto ref = [&](const Triple& t) -> std::int32_t {
    if (t.mid == seed.outside()) return const_ref(targets.outside());
    auto e = pb.base.entry_index(t);
    if (!e) throw MappingError("harvested triple outside the seed table");
    return static_cast<std::int32_t>(*e);
  };
  std::vector<std::array<std::int32_t, 4>> raw;
  for (const Triple& t : pb.sup.initial_triples) {
    if (t.mid == seed.outside()) continue;
    raw.push_back({const_ref(*pb.base.zmap(t.left)), const_ref(*pb.base.zmap(t.mid)),
                   const_ref(*pb.base.zmap(t.right)), ref(t)});
  }
  for (const SuperRecord& q : pb.sup.quints) {
    raw.push_back({ref(q.window(0)), ref(q.window(1)), ref(q.window(2)), ref(q.result())});
  }
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  pb.by_entry.assign(pb.base.domain_size(), {});
  for (const auto& r : raw) {
    const auto id = static_cast<std::uint32_t>(pb.records.size());
    pb.records.push_back({{r[0], r[1], r[2], r[3]}});
    std::int32_t last = -1;
    std::array<std::int32_t, 4> sorted = r;
    std::sort(sorted.begin(), sorted.end());
    for (std::int32_t x : sorted) {
      if (x >= 0 && x != last) pb.by_entry[static_cast<std::size_t>(x)].push_back(id);
      last = x;
    }
  }

  pb.allowed.resize(pb.base.domain_size());
  for (std::size_t e = 0; e < pb.base.domain_size(); ++e) {
    for (StateId v : allowed_values(pb.base, e)) pb.allowed[e].push_back(static_cast<std::uint8_t>(index(v)));
    if (!pb.allowed[e].empty()) pb.mutable_entries.push_back(static_cast<std::uint32_t>(e));
  }
  return pb;
}

// Per-worker incremental determinism state for one set of ls values.
class Evaluator {
 public:
  explicit Evaluator(const Problem& pb)
      : pb_(pb),
        counts_(pb.nx * pb.nx * pb.nx * pb.nx, 0),
        distinct_(pb.nx * pb.nx * pb.nx, 0),
        stamp_(pb.records.size(), 0) {}

  void load(const std::vector<std::uint8_t>& vals) {
    std::fill(counts_.begin(), counts_.end(), 0);
    std::fill(distinct_.begin(), distinct_.end(), 0);
    conflicts_ = 0;
    vals_ = vals;
    for (std::size_t i = 0; i < pb_.records.size(); ++i) add(pb_.records[i], +1);
  }

  const std::vector<std::uint8_t>& values() const noexcept { return vals_; }
  bool deterministic() const noexcept { return conflicts_ == 0; }

  // Applies the changes and reports determinism; undo() restores the loaded state.
  bool apply(const std::vector<std::pair<std::uint32_t, std::uint8_t>>& changes) {
    ++epoch_;
    touched_.clear();
    for (const auto& [e, v] : changes) {
      for (std::uint32_t r : pb_.by_entry[e]) {
        if (stamp_[r] != epoch_) {
          stamp_[r] = epoch_;
          touched_.push_back(r);
        }
      }
    }
    for (std::uint32_t r : touched_) add(pb_.records[r], -1);
    saved_.clear();
    for (const auto& [e, v] : changes) {
      saved_.emplace_back(e, vals_[e]);
      vals_[e] = v;
    }
    for (std::uint32_t r : touched_) add(pb_.records[r], +1);
    return conflicts_ == 0;
  }

  void undo() {
    for (std::uint32_t r : touched_) add(pb_.records[r], -1);
    for (auto it = saved_.rbegin(); it != saved_.rend(); ++it) vals_[it->first] = it->second;
    for (std::uint32_t r : touched_) add(pb_.records[r], +1);
    touched_.clear();
    saved_.clear();
  }

  // Simulated table of the current values, with the forced quiescent entries.
  std::vector<std::uint8_t> dense_table() const {
    const std::size_t n = pb_.nx;
    std::vector<std::uint8_t> d(n * n * n, kNone);
    for (std::size_t k = 0; k < d.size(); ++k) {
      if (distinct_[k] == 0) continue;
      for (std::size_t v = 0; v < n; ++v) {
        if (counts_[k * n + v]) {
          d[k] = static_cast<std::uint8_t>(v);
          break;
        }
      }
    }
    const std::size_t q = pb_.roles.quiescent, o = pb_.roles.outside;
    if (d[(q * n + q) * n + q] == kNone) d[(q * n + q) * n + q] = static_cast<std::uint8_t>(q);
    if (d[(o * n + q) * n + q] == kNone) d[(o * n + q) * n + q] = static_cast<std::uint8_t>(q);
    return d;
  }

 private:
  std::uint8_t resolve(std::int32_t ref) const {
    return ref >= 0 ? vals_[static_cast<std::size_t>(ref)] : static_cast<std::uint8_t>(-ref - 1);
  }

  void add(const Record& rec, int sign) {
    const std::size_t n = pb_.nx;
    const std::size_t key = (resolve(rec.ref[0]) * n + resolve(rec.ref[1])) * n + resolve(rec.ref[2]);
    std::uint32_t& c = counts_[key * n + resolve(rec.ref[3])];
    std::uint8_t& d = distinct_[key];
    if (sign > 0) {
      if (c++ == 0) {
        if (++d == 2) ++conflicts_;
      }
    } else {
      if (--c == 0) {
        if (d-- == 2) --conflicts_;
      }
    }
  }

  const Problem& pb_;
  std::vector<std::uint32_t> counts_;
  std::vector<std::uint8_t> distinct_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::size_t conflicts_ = 0;
  std::vector<std::uint8_t> vals_;
  std::vector<std::uint32_t> touched_;
  std::vector<std::pair<std::uint32_t, std::uint8_t>> saved_;
};

struct Node {
  std::uint64_t index = 0;
  std::optional<std::uint64_t> parent;
  std::vector<std::uint8_t> vals;
  std::uint64_t skip = 0;  // candidates of this node already merged
};

struct Candidate {
  bool admitted = false;
  bool mismatch = false;
  std::vector<std::uint8_t> vals;
  std::vector<std::uint8_t> dense;
  CanonicalKey key;
};

AutomatonSpec ca_from_dense(const Problem& pb, const std::vector<std::uint8_t>& dense) {
  AutomatonSpec ca;
  ca.alphabet = pb.base.targets();
  ca.boundary = pb.base.target_boundary();
  ca.quiescent = pb.base.target_quiescent();
  ca.generator = pb.base.target_generator();
  ca.table = StateTable(pb.nx);
  const std::size_t n = pb.nx;
  for (std::size_t s = 0; s < dense.size(); ++s) {
    if (dense[s] == kNone) continue;
    ca.table.insert({state_at(s / (n * n)), state_at((s / n) % n), state_at(s % n)}, state_at(dense[s]));
  }
  return ca;
}

bool full_check(const Problem& pb, const std::vector<std::uint8_t>& vals) {
  LocalMapping m = pb.base;
  for (std::size_t e = 0; e < vals.size(); ++e) m.set_value(e, state_at(vals[e]));
  return is_local_simulation(m, pb.sup).deterministic;
}

std::vector<Candidate> expand(const Problem& pb, const ExplorationConfig& cfg, Evaluator& ev,
                              const Node& node) {
  std::vector<Candidate> out;
  ev.load(node.vals);
  std::mt19937_64 rng(splitmix64(cfg.rng_seed ^ splitmix64(node.index)));
  std::vector<std::pair<std::uint32_t, std::uint8_t>> changes;

  auto evaluate = [&](const std::vector<std::pair<std::uint32_t, std::uint8_t>>& ch) {
    Candidate c;
    c.admitted = ev.apply(ch);
    if (cfg.test_mode) c.mismatch = full_check(pb, ev.values()) != c.admitted;
    if (c.admitted) {
      c.vals = ev.values();
      c.dense = ev.dense_table();
      c.key = key_from_dense(c.dense, pb.roles, pb.perms);
    }
    ev.undo();
    out.push_back(std::move(c));
  };

  auto add_random = [&](std::vector<std::pair<std::uint32_t, std::uint8_t>>& ch) {
    std::vector<std::uint8_t> cur = node.vals;
    for (const auto& [e, v] : ch) cur[e] = v;
    for (std::size_t i = 0; i < cfg.k && !pb.mutable_entries.empty(); ++i) {
      const std::uint32_t e = pb.mutable_entries[rng() % pb.mutable_entries.size()];
      const auto& opts = pb.allowed[e];
      std::vector<std::uint8_t> alt;
      for (std::uint8_t v : opts) {
        if (v != cur[e]) alt.push_back(v);
      }
      if (alt.empty()) continue;
      const std::uint8_t v = alt[rng() % alt.size()];
      cur[e] = v;
      ch.emplace_back(e, v);
    }
  };

  for (std::uint32_t e : pb.mutable_entries) {
    for (std::uint8_t v : pb.allowed[e]) {
      if (v == node.vals[e]) continue;
      changes.assign(1, {e, v});
      if (cfg.k == 0) {
        evaluate(changes);
      } else if (cfg.admit_before_modify) {
        evaluate(changes);
        add_random(changes);
        evaluate(changes);
      } else {
        add_random(changes);
        evaluate(changes);
      }
    }
  }
  return out;
}

struct Run {
  const ExplorationConfig& cfg;
  Problem pb;
  std::deque<Node> frontier;
  std::unordered_set<CanonicalKey> visited;
  std::size_t visited_bytes = 0;
  std::uint64_t next_index = 0;
  ExplorationStats stats;
};

std::size_t key_cost(const CanonicalKey& k) { return k.size() + 64; }

void emit(Run& run, const SolutionSink& sink, std::uint64_t index, std::optional<std::uint64_t> parent,
          const std::vector<std::uint8_t>& vals, const std::vector<std::uint8_t>& dense) {
  Solution sol;
  sol.index = index;
  sol.parent = parent;
  sol.ca = ca_from_dense(run.pb, dense);
  sol.transitions = count_transitions(sol.ca);
  sol.used_states = used_states(sol.ca);
  sol.mapping_values.reserve(vals.size());
  for (auto v : vals) sol.mapping_values.push_back(state_at(v));

  auto& st = run.stats;
  ++st.distinct;
  ++st.histogram[sol.transitions];
  if (sol.used_states <= 4) ++st.small_state_solutions;
  if (!st.best_transitions || sol.transitions < *st.best_transitions) {
    st.best_transitions = sol.transitions;
    st.best = sol.ca;
    st.best_history.emplace_back(index, sol.transitions);
  }
  if (run.cfg.test_mode) {
    const bool ok = check_candidate(sol.ca).pass &&
                    verify_solution(sol.ca, run.cfg.sequence, run.cfg.verify_horizon).pass;
    if (!ok) ++st.verification_failures;
  }
  if (sink) sink(sol);
}

void save(const Run& run, const std::filesystem::path& path);

void drive(Run& run, const SolutionSink& sink) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExplorationConfig& cfg = run.cfg;
  const std::size_t workers = std::max<std::size_t>(1, cfg.workers);
  std::vector<Evaluator> evs;
  for (std::size_t i = 0; i < workers; ++i) evs.emplace_back(run.pb);
  std::uint64_t since_checkpoint = 0;
  bool stopped = false;

  auto budget_hit = [&]() -> bool {
    if (run.stats.distinct >= cfg.node_budget) {
      run.stats.stop = StopReason::node_budget;
      return true;
    }
    if (run.visited_bytes > cfg.memory_budget) {
      run.stats.stop = StopReason::memory_budget;
      return true;
    }
    return false;
  };

  stopped = budget_hit();
  while (!stopped && !run.frontier.empty()) {
    const std::size_t batch = std::min(workers, run.frontier.size());
    std::vector<std::vector<Candidate>> results(batch);
    if (batch == 1) {
      results[0] = expand(run.pb, cfg, evs[0], run.frontier.front());
    } else {
      std::vector<std::thread> threads;
      for (std::size_t i = 0; i < batch; ++i) {
        threads.emplace_back([&, i] { results[i] = expand(run.pb, cfg, evs[i], run.frontier[i]); });
      }
      for (auto& t : threads) t.join();
    }

    for (std::size_t i = 0; i < batch && !stopped; ++i) {
      Node& node = run.frontier.front();
      auto& cands = results[i];
      for (std::size_t c = node.skip; c < cands.size(); ++c) {
        Candidate& cand = cands[c];
        ++run.stats.candidates_tested;
        if (cand.mismatch) ++run.stats.incremental_mismatches;
        if (cand.admitted) {
          ++run.stats.admitted_raw;
          if (run.visited.insert(cand.key).second) {
            run.visited_bytes += key_cost(cand.key);
            const std::uint64_t idx = run.next_index++;
            emit(run, sink, idx, node.index, cand.vals, cand.dense);
            run.frontier.push_back({idx, node.index, std::move(cand.vals), 0});
          }
        }
        if (budget_hit()) {
          node.skip = c + 1;
          stopped = true;
          break;
        }
      }
      if (stopped) break;
      run.frontier.pop_front();
      ++run.stats.nodes_expanded;
      run.stats.visited_growth.emplace_back(run.stats.nodes_expanded, run.stats.distinct);
      if (cfg.checkpoint_path && cfg.checkpoint_every && ++since_checkpoint >= cfg.checkpoint_every) {
        save(run, *cfg.checkpoint_path);
        since_checkpoint = 0;
      }
    }
  }
  if (!stopped) run.stats.stop = StopReason::frontier_exhausted;
  auto& growth = run.stats.visited_growth;
  if (growth.empty() || growth.back().second != run.stats.distinct) {
    growth.emplace_back(run.stats.nodes_expanded, run.stats.distinct);
  }
  if (cfg.checkpoint_path) save(run, *cfg.checkpoint_path);
  run.stats.elapsed_seconds +=
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Checkpoint layout (little-endian): "LSIM", u32 version, search config, counters,
// frontier, visited keys, then a u64 FNV-1a of all preceding bytes.
constexpr std::uint32_t kCheckpointVersion = 1;

void save(const Run& run, const std::filesystem::path& path) {
  using detail::ByteWriter;
  ByteWriter w;
  w.raw("LSIM");
  w.u32(kCheckpointVersion);
  const ExplorationConfig& cfg = run.cfg;
  w.u64(cfg.rng_seed);
  w.u64(cfg.k);
  w.u64(cfg.states);
  w.u64(cfg.verify_horizon);
  w.u64(cfg.super_horizon);
  w.u64(cfg.super_window);
  w.u8(cfg.admit_before_modify ? 1 : 0);
  w.str(cfg.sequence.name());
  w.str(format_ca(cfg.seed));

  const auto& st = run.stats;
  w.u64(st.nodes_expanded);
  w.u64(st.candidates_tested);
  w.u64(st.admitted_raw);
  w.u64(st.distinct);
  w.u64(st.verification_failures);
  w.u64(st.incremental_mismatches);
  w.u64(st.small_state_solutions);
  w.u64(run.next_index);
  w.u64(st.histogram.size());
  for (const auto& [k, v] : st.histogram) {
    w.u64(k);
    w.u64(v);
  }
  w.u8(st.best ? 1 : 0);
  if (st.best) {
    w.u64(*st.best_transitions);
    w.str(format_ca(*st.best));
  }
  w.u64(st.best_history.size());
  for (const auto& [a, b] : st.best_history) {
    w.u64(a);
    w.u64(b);
  }
  w.u64(st.visited_growth.size());
  for (const auto& [a, b] : st.visited_growth) {
    w.u64(a);
    w.u64(b);
  }

  w.u64(run.frontier.size());
  for (const Node& n : run.frontier) {
    w.u64(n.index);
    w.u8(n.parent ? 1 : 0);
    w.u64(n.parent.value_or(0));
    w.u64(n.skip);
    w.str(std::string(n.vals.begin(), n.vals.end()));
  }
  // Sorted so the file is a function of the run state alone.
  std::vector<const CanonicalKey*> keys;
  keys.reserve(run.visited.size());
  for (const auto& k : run.visited) keys.push_back(&k);
  std::sort(keys.begin(), keys.end(), [](auto* a, auto* b) { return *a < *b; });
  w.u64(keys.size());
  for (const auto* k : keys) w.str(*k);
  w.finish();

  const std::filesystem::path tmp = path.string() + ".tmp";
  detail::write_file(tmp, w.bytes());
  std::filesystem::rename(tmp, path);
}

struct Loaded {
  ExplorationConfig cfg;
  ExplorationStats stats;
  std::uint64_t next_index = 0;
  std::deque<Node> frontier;
  std::vector<CanonicalKey> visited;
};

Loaded load(const std::filesystem::path& path) {
  using detail::ByteReader;
  const std::string data = detail::read_file(path);
  ByteReader r(data);
  Loaded L;
  try {
    if (r.raw(4) != "LSIM") throw CheckpointError("bad magic");
    if (r.u32() != kCheckpointVersion) throw CheckpointError("unsupported checkpoint version");
    L.cfg.rng_seed = r.u64();
    L.cfg.k = r.u64();
    L.cfg.states = r.u64();
    L.cfg.verify_horizon = r.u64();
    L.cfg.super_horizon = r.u64();
    L.cfg.super_window = r.u64();
    L.cfg.admit_before_modify = r.u8() != 0;
    L.cfg.sequence = parse_sequence(r.str());
    L.cfg.seed = parse_ca(r.str(), path.string() + "#seed");

    auto& st = L.stats;
    st.nodes_expanded = r.u64();
    st.candidates_tested = r.u64();
    st.admitted_raw = r.u64();
    st.distinct = r.u64();
    st.verification_failures = r.u64();
    st.incremental_mismatches = r.u64();
    st.small_state_solutions = r.u64();
    L.next_index = r.u64();
    for (std::uint64_t i = 0, n = r.u64(); i < n; ++i) {
      const auto k = r.u64();
      st.histogram[k] = r.u64();
    }
    if (r.u8()) {
      st.best_transitions = r.u64();
      st.best = parse_ca(r.str(), path.string() + "#best");
    }
    for (std::uint64_t i = 0, n = r.u64(); i < n; ++i) {
      const auto a = r.u64();
      st.best_history.emplace_back(a, r.u64());
    }
    for (std::uint64_t i = 0, n = r.u64(); i < n; ++i) {
      const auto a = r.u64();
      st.visited_growth.emplace_back(a, r.u64());
    }
    for (std::uint64_t i = 0, n = r.u64(); i < n; ++i) {
      Node node;
      node.index = r.u64();
      const bool has_parent = r.u8() != 0;
      const auto parent = r.u64();
      if (has_parent) node.parent = parent;
      node.skip = r.u64();
      const std::string v = r.str();
      node.vals.assign(v.begin(), v.end());
      L.frontier.push_back(std::move(node));
    }
    for (std::uint64_t i = 0, n = r.u64(); i < n; ++i) L.visited.push_back(r.str());
    r.verify_checksum();
  } catch (const CheckpointError&) {
    throw;
  } catch (const std::exception& e) {
    throw CheckpointError(std::string("corrupt checkpoint: ") + e.what());
  }
  return L;
}

}  // namespace

CanonicalKey canonical_key(const AutomatonSpec& ca) {
  const Roles r = roles_of(ca);
  return key_from_dense(dense_of(ca.table), r, role_fixing_permutations(r));
}

AutomatonSpec canonical_form(const AutomatonSpec& ca) {
  const Roles r = roles_of(ca);
  const auto dense = dense_of(ca.table);
  const auto perms = role_fixing_permutations(r);
  const CanonicalKey best = key_from_dense(dense, r, perms);
  for (const auto& pi : perms) {
    if (key_from_dense(dense, r, {pi}) != best) continue;
    AutomatonSpec out = ca;
    out.table = StateTable(r.n);
    auto map = [&](StateId s) { return state_at(pi[index(s)]); };
    for (const auto& [t, v] : ca.table.entries()) {
      out.table.insert({map(t.left), map(t.mid), map(t.right)}, map(v));
    }
    return out;
  }
  return ca;
}

std::vector<StateId> allowed_values(const LocalMapping& m, std::size_t entry) {
  const AutomatonSpec& src = m.source();
  const Triple& t = m.domain().at(entry);
  const StateId q = src.quiescent;
  if (t == Triple{q, q, q} || t == Triple{src.outside(), q, q}) return {};
  const bool left_outside = t.left == src.outside();
  if (left_outside && *src.table.find(t) == src.generator) return {};
  std::vector<StateId> out;
  for (StateId s : m.targets().inner_states()) {
    if (left_outside && s == m.target_generator()) continue;
    out.push_back(s);
  }
  return out;
}

std::vector<LocalMapping> neighbors(const LocalMapping& m) {
  std::vector<LocalMapping> out;
  for (std::size_t e = 0; e < m.domain_size(); ++e) {
    for (StateId v : allowed_values(m, e)) {
      if (v == m.value(e)) continue;
      LocalMapping n = m;
      n.set_value(e, v);
      out.push_back(std::move(n));
    }
  }
  return out;
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::frontier_exhausted: return "frontier-exhausted";
    case StopReason::node_budget: return "node-budget";
    case StopReason::memory_budget: return "memory-budget";
  }
  return "?";
}

ExplorationStats explore(const ExplorationConfig& cfg, const SolutionSink& sink) {
  Run run{cfg, make_problem(cfg), {}, {}, 0, 0, {}};
  std::vector<std::uint8_t> vals;
  for (StateId v : run.pb.base.values()) vals.push_back(static_cast<std::uint8_t>(index(v)));
  Evaluator ev(run.pb);
  ev.load(vals);
  if (!ev.deterministic()) throw NonDeterministic("identity mapping of the seed is not a local simulation");
  const auto dense = ev.dense_table();
  const CanonicalKey key = key_from_dense(dense, run.pb.roles, run.pb.perms);
  run.visited.insert(key);
  run.visited_bytes += key_cost(key);
  const std::uint64_t idx = run.next_index++;
  emit(run, sink, idx, std::nullopt, vals, dense);
  run.frontier.push_back({idx, std::nullopt, vals, 0});
  drive(run, sink);
  return run.stats;
}

ExplorationConfig read_checkpoint_config(const std::filesystem::path& checkpoint) {
  return load(checkpoint).cfg;
}

ExplorationStats resume(const std::filesystem::path& checkpoint, const ExplorationConfig& cfg,
                        const SolutionSink& sink) {
  Loaded L = load(checkpoint);
  ExplorationConfig merged = L.cfg;
  merged.node_budget = cfg.node_budget;
  merged.memory_budget = cfg.memory_budget;
  merged.workers = cfg.workers;
  merged.test_mode = cfg.test_mode;
  merged.checkpoint_path = cfg.checkpoint_path;
  merged.checkpoint_every = cfg.checkpoint_every;
  Run run{merged, make_problem(merged), std::move(L.frontier), {}, 0, L.next_index, std::move(L.stats)};
  for (auto& k : L.visited) {
    run.visited_bytes += key_cost(k);
    run.visited.insert(std::move(k));
  }
  for (const Node& n : run.frontier) {
    if (n.vals.size() != run.pb.base.domain_size()) throw CheckpointError("frontier node size mismatch");
  }
  drive(run, sink);
  return run.stats;
}

ExplorationStats stats_report(const std::vector<AutomatonSpec>& solutions) {
  ExplorationStats st;
  std::uint64_t i = 0;
  for (const auto& ca : solutions) {
    const std::size_t m = count_transitions(ca);
    ++st.distinct;
    ++st.histogram[m];
    if (!st.best_transitions || m < *st.best_transitions) {
      st.best_transitions = m;
      st.best = ca;
      st.best_history.emplace_back(i, m);
    }
    if (used_states(ca) <= 4) ++st.small_state_solutions;
    ++i;
  }
  return st;
}

std::uint64_t histogram_total(const std::map<std::size_t, std::uint64_t>& histogram) {
  std::uint64_t s = 0;
  for (const auto& [k, v] : histogram) s += v;
  return s;
}

std::map<std::size_t, std::uint64_t> parse_histogram(std::string_view text) {
  std::map<std::size_t, std::uint64_t> h;
  std::size_t pos = 0, lineno = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    auto toks = detail::tokenize_line(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++lineno;
    if (toks.empty()) continue;
    if (toks.size() != 2 || toks[0].empty() || toks[0].back() != ':') {
      throw ParseError("<histogram>", lineno, "expected '<transitions>: <count>'");
    }
    try {
      const auto k = std::stoull(toks[0].substr(0, toks[0].size() - 1));
      if (h.count(k)) throw ParseError("<histogram>", lineno, "duplicate key");
      h[k] = std::stoull(toks[1]);
    } catch (const std::logic_error&) {
      throw ParseError("<histogram>", lineno, "bad number");
    }
  }
  return h;
}

}  // namespace locasim

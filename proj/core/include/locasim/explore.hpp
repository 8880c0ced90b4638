#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "locasim/automaton.hpp"
#include "locasim/localmap.hpp"
#include "locasim/rtsg.hpp"

namespace locasim {

// Lexicographically minimal table serialization over all permutations of the
// non-role states (roles *, B, Q and the generator stay fixed).
using CanonicalKey = std::string;
CanonicalKey canonical_key(const AutomatonSpec& ca);
// The relabelling of ca whose serialization is its canonical key.
AutomatonSpec canonical_form(const AutomatonSpec& ca);

// Values an ls entry may take while keeping compliance conditions (1)-(3).
// Empty for immutable entries.
std::vector<StateId> allowed_values(const LocalMapping& m, std::size_t entry);

// Every mapping that differs from m in exactly one ls entry within allowed_values.
std::vector<LocalMapping> neighbors(const LocalMapping& m);

struct ExplorationConfig {
  AutomatonSpec seed;
  SequenceSpec sequence = SequenceSpec::of(SequenceKind::cube);
  std::size_t states = 0;           // non-* target states; 0 keeps the seed's alphabet
  std::size_t k = 0;                // extra random modifications per neighbor
  std::size_t node_budget = 100000; // distinct solutions
  std::size_t memory_budget = 1ull << 30;  // bytes for the visited-key set
  std::uint64_t rng_seed = 1;
  std::size_t verify_horizon = 130;
  std::size_t super_horizon = 400;
  std::size_t super_window = 100;
  std::size_t workers = 1;
  bool admit_before_modify = false;
  // Re-verify every emission and cross-check the incremental admission test.
  bool test_mode = false;
  std::optional<std::filesystem::path> checkpoint_path;
  std::size_t checkpoint_every = 0;  // expansions between checkpoints; 0 writes only at stop
};

enum class StopReason { frontier_exhausted, node_budget, memory_budget };
std::string to_string(StopReason r);

struct Solution {
  std::uint64_t index = 0;
  std::optional<std::uint64_t> parent;
  AutomatonSpec ca;
  std::size_t transitions = 0;
  std::size_t used_states = 0;  // distinct non-* states occurring in the table
  std::vector<StateId> mapping_values;
};

struct ExplorationStats {
  std::uint64_t nodes_expanded = 0;
  std::uint64_t candidates_tested = 0;
  std::uint64_t admitted_raw = 0;  // deterministic candidates, duplicates included
  std::uint64_t distinct = 0;
  std::uint64_t verification_failures = 0;
  std::uint64_t incremental_mismatches = 0;
  std::uint64_t small_state_solutions = 0;  // at most 4 used non-* states
  std::map<std::size_t, std::uint64_t> histogram;
  std::optional<std::size_t> best_transitions;
  std::optional<AutomatonSpec> best;
  std::vector<std::pair<std::uint64_t, std::size_t>> best_history;    // (index, transitions)
  std::vector<std::pair<std::uint64_t, std::uint64_t>> visited_growth;  // (expanded, distinct)
  StopReason stop = StopReason::frontier_exhausted;
  double elapsed_seconds = 0;
};

using SolutionSink = std::function<void(const Solution&)>;

// Breadth-first search from the identity mapping of cfg.seed.
// Throws NonDeterministic / NonCompliant if the start mapping is not admissible.
ExplorationStats explore(const ExplorationConfig& cfg, const SolutionSink& sink = {});

// Continues a run from a checkpoint. Budgets, workers, test mode and the checkpoint
// path come from cfg; everything that shapes the search comes from the file.
ExplorationStats resume(const std::filesystem::path& checkpoint, const ExplorationConfig& cfg,
                        const SolutionSink& sink = {});

// Reads the search-shaping fields stored in a checkpoint.
ExplorationConfig read_checkpoint_config(const std::filesystem::path& checkpoint);

// Histogram by transition count.
ExplorationStats stats_report(const std::vector<AutomatonSpec>& solutions);
std::uint64_t histogram_total(const std::map<std::size_t, std::uint64_t>& histogram);

// Parses `count: solutions` lines (comments allowed).
std::map<std::size_t, std::uint64_t> parse_histogram(std::string_view text);

}  // namespace locasim

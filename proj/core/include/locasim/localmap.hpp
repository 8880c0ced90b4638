#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "locasim/automaton.hpp"
#include "locasim/diagram.hpp"

namespace locasim {

// (lz, ls) from a source automaton to a target alphabet X.
// ls is stored for the source entries with mid != *; entries with mid == * map to target *.
class LocalMapping {
 public:
  LocalMapping() = default;
  // Domain is taken from source.table; every ls value starts at target *.
  LocalMapping(AutomatonSpec source, Alphabet targets, StateId target_boundary,
               StateId target_quiescent, StateId target_generator);

  const AutomatonSpec& source() const noexcept { return source_; }
  const Alphabet& targets() const noexcept { return targets_; }
  StateId target_outside() const noexcept { return targets_.outside(); }
  StateId target_boundary() const noexcept { return boundary_; }
  StateId target_quiescent() const noexcept { return quiescent_; }
  StateId target_generator() const noexcept { return generator_; }

  // Source states occurring in the initial configuration: *, B, Q.
  std::vector<StateId> zmap_domain() const;
  std::optional<StateId> zmap(StateId source_state) const;
  void set_zmap(StateId source_state, StateId target);

  // Source triples with mid != *, in table order.
  const std::vector<Triple>& domain() const noexcept { return domain_; }
  std::size_t domain_size() const noexcept { return domain_.size(); }
  std::optional<std::size_t> entry_index(const Triple& source_triple) const;
  StateId value(std::size_t entry) const { return values_.at(entry); }
  void set_value(std::size_t entry, StateId target) { values_.at(entry) = target; }
  const std::vector<StateId>& values() const noexcept { return values_; }

  // ls(t), with the implicit * for mid == *. Throws MappingError outside the domain.
  StateId image(const Triple& source_triple) const;

  friend bool operator==(const LocalMapping&, const LocalMapping&) = default;

 private:
  AutomatonSpec source_;
  Alphabet targets_;
  StateId boundary_{}, quiescent_{}, generator_{};
  std::vector<std::optional<StateId>> zmap_;
  std::vector<Triple> domain_;
  std::vector<StateId> values_;
  std::vector<std::int32_t> slot_to_entry_;
};

struct SuperRecord {
  std::array<StateId, 5> q{};
  std::array<StateId, 3> r{};

  Triple window(std::size_t i) const { return {q[i], q[i + 1], q[i + 2]}; }
  Triple result() const { return {r[0], r[1], r[2]}; }
  friend auto operator<=>(const SuperRecord&, const SuperRecord&) = default;
};

struct SuperTransitionSet {
  std::vector<Triple> initial_triples;  // sorted, unique
  std::vector<SuperRecord> quints;      // sorted by q, unique
  std::size_t saturated_at = 0;         // last row that contributed a new quintuple
  std::size_t horizon = 0;              // T_max
  std::size_t window = 0;               // W

  bool saturated() const noexcept { return horizon - saturated_at >= window; }
};

// Initial triples of row 0 (p >= -1) and quintuples centred at p >= 1 from rows 0..T_max-1.
// Throws MissingTransition if a harvested result triple is itself undefined.
SuperTransitionSet collect_supers(const AutomatonSpec& ca, std::size_t T_max, std::size_t W);

LocalMapping identity_mapping(const AutomatonSpec& ca);

LocalRelation induce_relation(const LocalMapping& m, const SuperTransitionSet& sup);

// Rows 0..T+1 over width T+3: row 0 through lz, row t+1 through ls of the source row t.
DiagramWindow apply_mapping_to_window(const LocalMapping& m, const DiagramWindow& w);

DeterminismReport is_local_simulation(const LocalMapping& m, const SuperTransitionSet& sup);

struct ConditionResult {
  bool pass = true;
  std::vector<std::string> witnesses;
};

struct ComplianceReport {
  bool pass = true;
  std::array<ConditionResult, 4> conditions;
};

ComplianceReport check_compliance(const LocalMapping& m);

// Induced relation as an automaton over the targets, without compliance checks.
// Throws NonDeterministic.
AutomatonSpec simulated_ca_unchecked(const LocalMapping& m, const SuperTransitionSet& sup);
// Throws NonCompliant or NonDeterministic.
AutomatonSpec build_simulated_ca(const LocalMapping& m, const SuperTransitionSet& sup);

// Override lines (`smap:` and `zmap:`) applied on top of a base mapping.
struct MappingPatch {
  std::vector<std::pair<Triple, StateId>> smap;
  std::vector<std::pair<StateId, StateId>> zmap;
};

// Source states named Q, B, A, C, D, E with generator A. Target X = {Q, B, C, D, E}
// with generator D: every ls entry whose source result is A becomes D when the left
// state is * and E otherwise. The patch is applied last.
LocalMapping handcraft_script(const AutomatonSpec& seed, const MappingPatch& patch = {});

// Mapping text format: targets/boundary/quiescent/generator headers, zmap and smap lines.
std::string format_mapping(const LocalMapping& m);
LocalMapping parse_mapping(std::string_view text, const AutomatonSpec& source,
                           const std::string& name = "<string>");
LocalMapping load_mapping(const std::filesystem::path& path, const AutomatonSpec& source);
void save_mapping(const LocalMapping& m, const std::filesystem::path& path);

// Patch names resolve against the mapping's source (left side) and targets (right side).
MappingPatch parse_patch(std::string_view text, const LocalMapping& base,
                         const std::string& name = "<string>");
MappingPatch load_patch(const std::filesystem::path& path, const LocalMapping& base);
void apply_patch(LocalMapping& m, const MappingPatch& patch);

}  // namespace locasim

#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "locasim/automaton.hpp"

namespace locasim {

// Rows 0..horizon of a space-time diagram over positions 1..width.
// Every p <= 0 is the outside state; every p > width in row t holds tail(t).
class DiagramWindow {
 public:
  DiagramWindow() = default;
  DiagramWindow(std::size_t horizon, std::size_t width, StateId outside);

  std::size_t horizon() const noexcept { return horizon_; }
  std::size_t width() const noexcept { return width_; }
  StateId outside() const noexcept { return outside_; }

  // Any position, virtual cells included.
  StateId at(std::size_t t, long long p) const noexcept {
    if (p <= 0) return outside_;
    if (static_cast<std::size_t>(p) > width_) return tail_[t];
    return cells_[t * width_ + static_cast<std::size_t>(p - 1)];
  }
  void set(std::size_t t, long long p, StateId s) {
    cells_[t * width_ + static_cast<std::size_t>(p - 1)] = s;
  }
  StateId tail(std::size_t t) const noexcept { return tail_[t]; }
  void set_tail(std::size_t t, StateId s) { tail_[t] = s; }

  std::span<const StateId> row(std::size_t t) const {
    return {cells_.data() + t * width_, width_};
  }

  friend bool operator==(const DiagramWindow&, const DiagramWindow&) = default;

 private:
  std::size_t horizon_ = 0;
  std::size_t width_ = 0;
  StateId outside_{};
  std::vector<StateId> cells_;
  std::vector<StateId> tail_;
};

// Space-time diagram of the RTSG initial configuration, rows 0..T, width T+2.
// Throws MissingTransition on a reachable triple absent from the table.
DiagramWindow run_diagram(const AutomatonSpec& ca, std::size_t T);

// Cells at p >= t+2 must hold the quiescent state.
bool satisfies_light_cone(const DiagramWindow& w, StateId quiescent);

class LocalRelation {
 public:
  using Entry = std::pair<Triple, StateId>;

  void add(const Triple& t, StateId r) { entries_.emplace(t, r); }
  bool contains(const Triple& t, StateId r) const { return entries_.count({t, r}) != 0; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::set<Entry>& entries() const noexcept { return entries_; }
  void merge(const LocalRelation& other) { entries_.insert(other.entries_.begin(), other.entries_.end()); }

  friend bool operator==(const LocalRelation&, const LocalRelation&) = default;

 private:
  std::set<Entry> entries_;
};

struct Conflict {
  Triple triple;
  std::vector<StateId> results;
};

struct DeterminismReport {
  bool deterministic = true;
  std::vector<Conflict> conflicts;
};

// Pairs ((d(t,p-1), d(t,p), d(t,p+1)), d(t+1,p)) for p in [1, width], t+1 <= horizon.
LocalRelation extract_relation(const DiagramWindow& w);
LocalRelation extract_relation(std::span<const DiagramWindow> windows);

DeterminismReport is_deterministic(const LocalRelation& rel);

// The relation as a table. Throws NonDeterministic on conflicts.
StateTable relation_to_table(const LocalRelation& rel, std::size_t alphabet_size);

}  // namespace locasim

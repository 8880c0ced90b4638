#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace locasim {

// Dense index of a state inside one alphabet.
enum class StateId : std::uint8_t {};

constexpr std::size_t index(StateId s) noexcept { return static_cast<std::size_t>(s); }
constexpr StateId state_at(std::size_t i) noexcept { return static_cast<StateId>(i); }

// Upper bound on alphabet size, outside state included.
inline constexpr std::size_t kMaxStates = 64;

// Local configuration (left, mid, right).
struct Triple {
  StateId left{};
  StateId mid{};
  StateId right{};

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

class InvalidAutomaton : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ordered set of state names. Exactly one of them is the reserved outside name "*".
class Alphabet {
 public:
  static constexpr std::string_view kOutsideName = "*";

  Alphabet() = default;
  // Throws InvalidAutomaton on duplicate, empty or whitespace-containing names,
  // or when "*" is not present exactly once.
  explicit Alphabet(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(StateId s) const { return names_.at(index(s)); }
  std::optional<StateId> find(std::string_view name) const noexcept;
  StateId outside() const noexcept { return outside_; }
  std::span<const std::string> names() const noexcept { return names_; }

  // All states except the outside one, in index order.
  std::vector<StateId> inner_states() const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> names_;
  StateId outside_{};
};

// Partial local transition function over an alphabet of fixed size.
// Absent triples are a distinct outcome of find(), never a default state.
class StateTable {
 public:
  StateTable() = default;
  explicit StateTable(std::size_t alphabet_size);

  std::size_t alphabet_size() const noexcept { return n_; }
  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }

  std::optional<StateId> find(const Triple& t) const noexcept {
    const std::uint8_t v = cells_[slot(t)];
    if (v == kAbsent) return std::nullopt;
    return state_at(v);
  }
  bool contains(const Triple& t) const noexcept { return cells_[slot(t)] != kAbsent; }

  // Returns false (and leaves the table untouched) if the triple already has an entry.
  bool insert(const Triple& t, StateId result);
  // Inserts or overwrites.
  void assign(const Triple& t, StateId result);
  bool erase(const Triple& t);

  // Entries in lexicographic (left, mid, right) index order.
  std::vector<std::pair<Triple, StateId>> entries() const;

  friend bool operator==(const StateTable&, const StateTable&) = default;

 private:
  static constexpr std::uint8_t kAbsent = 0xFF;

  std::size_t slot(const Triple& t) const noexcept {
    return (index(t.left) * n_ + index(t.mid)) * n_ + index(t.right);
  }

  std::size_t n_ = 0;
  std::size_t count_ = 0;
  std::vector<std::uint8_t> cells_;
};

// A candidate real-time sequence generator: alphabet, special-state roles and table.
// The initial configuration is implied by the roles: outside at p <= 0,
// boundary at p = 1 and quiescent at p >= 2.
struct AutomatonSpec {
  Alphabet alphabet;
  StateId boundary{};
  StateId quiescent{};
  StateId generator{};
  StateTable table;

  StateId outside() const noexcept { return alphabet.outside(); }

  // Throws InvalidAutomaton when roles point at the outside state or out of range,
  // or when the table was built for a different alphabet size.
  void validate() const;

  friend bool operator==(const AutomatonSpec&, const AutomatonSpec&) = default;
};

// |Σ \ {⋆}|
std::size_t count_states(const AutomatonSpec& ca);
// Number of table entries whose middle state is not the outside state.
std::size_t count_transitions(const AutomatonSpec& ca);

std::string format_triple(const Alphabet& alphabet, const Triple& t);

}  // namespace locasim

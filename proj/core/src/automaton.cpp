#include "locasim/automaton.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace locasim {

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > kMaxStates) {
    throw InvalidAutomaton("alphabet has " + std::to_string(names_.size()) +
                           " states, limit is " + std::to_string(kMaxStates));
  }
  std::unordered_set<std::string_view> seen;
  std::size_t outside_count = 0;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const std::string& n = names_[i];
    if (n.empty()) throw InvalidAutomaton("empty state name");
    if (std::any_of(n.begin(), n.end(), [](unsigned char c) { return std::isspace(c); })) {
      throw InvalidAutomaton("state name '" + n + "' contains whitespace");
    }
    if (!seen.insert(n).second) throw InvalidAutomaton("duplicate state name '" + n + "'");
    if (n == kOutsideName) {
      ++outside_count;
      outside_ = state_at(i);
    }
  }
  if (outside_count != 1) throw InvalidAutomaton("alphabet must contain the outside state '*'");
}

std::optional<StateId> Alphabet::find(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return state_at(i);
  }
  return std::nullopt;
}

std::vector<StateId> Alphabet::inner_states() const {
  std::vector<StateId> out;
  out.reserve(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (state_at(i) != outside_) out.push_back(state_at(i));
  }
  return out;
}

StateTable::StateTable(std::size_t alphabet_size)
    : n_(alphabet_size), cells_(alphabet_size * alphabet_size * alphabet_size, kAbsent) {
  if (alphabet_size > kMaxStates) throw InvalidAutomaton("alphabet too large for a table");
}

bool StateTable::insert(const Triple& t, StateId result) {
  std::uint8_t& c = cells_[slot(t)];
  if (c != kAbsent) return false;
  c = static_cast<std::uint8_t>(index(result));
  ++count_;
  return true;
}

void StateTable::assign(const Triple& t, StateId result) {
  std::uint8_t& c = cells_[slot(t)];
  if (c == kAbsent) ++count_;
  c = static_cast<std::uint8_t>(index(result));
}

bool StateTable::erase(const Triple& t) {
  std::uint8_t& c = cells_[slot(t)];
  if (c == kAbsent) return false;
  c = kAbsent;
  --count_;
  return true;
}

std::vector<std::pair<Triple, StateId>> StateTable::entries() const {
  std::vector<std::pair<Triple, StateId>> out;
  out.reserve(count_);
  for (std::size_t s = 0; s < cells_.size(); ++s) {
    if (cells_[s] == kAbsent) continue;
    const Triple t{state_at(s / (n_ * n_)), state_at((s / n_) % n_), state_at(s % n_)};
    out.emplace_back(t, state_at(cells_[s]));
  }
  return out;
}

void AutomatonSpec::validate() const {
  const std::size_t n = alphabet.size();
  if (n == 0) throw InvalidAutomaton("empty alphabet");
  if (table.alphabet_size() != n) throw InvalidAutomaton("table does not match alphabet size");
  auto check_role = [&](StateId s, const char* role) {
    if (index(s) >= n) throw InvalidAutomaton(std::string(role) + " state out of range");
    if (s == outside()) throw InvalidAutomaton(std::string(role) + " state must differ from '*'");
  };
  check_role(boundary, "boundary");
  check_role(quiescent, "quiescent");
  check_role(generator, "generator");
}

std::size_t count_states(const AutomatonSpec& ca) { return ca.alphabet.size() - 1; }

std::size_t count_transitions(const AutomatonSpec& ca) {
  std::size_t m = 0;
  for (const auto& [t, r] : ca.table.entries()) {
    if (t.mid != ca.outside()) ++m;
  }
  return m;
}

std::string format_triple(const Alphabet& alphabet, const Triple& t) {
  return alphabet.name(t.left) + " " + alphabet.name(t.mid) + " " + alphabet.name(t.right);
}

}  // namespace locasim

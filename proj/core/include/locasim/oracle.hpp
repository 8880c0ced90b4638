#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "locasim/automaton.hpp"
#include "locasim/rtsg.hpp"

namespace locasim {

struct EnumerationSpace {
  std::size_t states = 2;  // non-* states, named 0, 1, ...
  std::size_t horizon = 64;
  bool allow_big = false;  // required for states >= 3
  // Pin (*,Q,Q)->Q. Without it the tables are no longer candidates, but cover
  // automata whose leftmost cell may leave Q on its own.
  bool pin_edge = true;
};

// Every role assignment (B, Q, S may coincide) and every total assignment of the
// mid != * entries with (Q,Q,Q)->Q and (*,Q,Q)->Q pinned. The sink returns false to stop.
// Returns the number of candidates produced.
std::uint64_t enumerate_candidates(const EnumerationSpace& space,
                                   const std::function<bool(const AutomatonSpec&)>& sink);
std::vector<AutomatonSpec> enumerate_candidates(const EnumerationSpace& space);

// Builtin families whose membership over [0, prefix.size()-1] equals the prefix.
// Linear families are fitted from the first two members. Finite-horizon agreement only.
std::vector<SequenceSpec> classify_prefix(const std::vector<bool>& prefix);

// Generator column over [0, T] as a bitmap; bit 0 (the initial row) is always clear.
std::vector<bool> generated_prefix(const AutomatonSpec& ca, std::size_t T);

// Bit t is bit (t % 8) of byte t / 8, bytes printed as two lowercase hex digits.
std::string prefix_hex(const std::vector<bool>& prefix);

struct CatalogEntry {
  AutomatonSpec ca;
  std::vector<bool> prefix;
  std::vector<SequenceSpec> matches;
};

std::vector<CatalogEntry> build_catalog(const EnumerationSpace& space);

}  // namespace locasim

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "locasim/automaton.hpp"

namespace locasim {

enum class SequenceKind {
  cube,          // n^3
  square,        // n^2
  pow2,          // 2^n
  pow2_minus_1,  // 2^n - 1
  pow2_shift,    // 2^(n+1) - 2
  pow3,          // 3^n
  fibonacci,     // 1, 2, 3, 5, 8, ...
  primes,
  linear,        // a*n + b
  list,          // explicit finite set
};

// S = { f(n) | n >= 1 } for the named families.
class SequenceSpec {
 public:
  SequenceSpec() = default;

  static SequenceSpec of(SequenceKind kind);
  static SequenceSpec linear(std::int64_t a, std::int64_t b);
  static SequenceSpec list(std::vector<std::uint64_t> members);

  SequenceKind kind() const noexcept { return kind_; }
  std::int64_t a() const noexcept { return a_; }
  std::int64_t b() const noexcept { return b_; }
  const std::vector<std::uint64_t>& members() const noexcept { return list_; }

  bool contains(std::uint64_t t) const;
  // Members in [0, T], ascending.
  std::vector<std::uint64_t> members_upto(std::uint64_t T) const;
  // Membership bitmap over [0, T].
  std::vector<bool> prefix(std::uint64_t T) const;

  // Round-trips through parse_sequence.
  std::string name() const;

  friend bool operator==(const SequenceSpec&, const SequenceSpec&) = default;

 private:
  SequenceKind kind_ = SequenceKind::list;
  std::int64_t a_ = 0;
  std::int64_t b_ = 0;
  std::vector<std::uint64_t> list_;
};

// Accepts cube, square, pow2, pow2-minus-1, pow2-shift, pow3, fibonacci, primes,
// linear:A,B and list:T1,T2,... (list: alone is the empty set).
// Throws std::invalid_argument on anything else.
SequenceSpec parse_sequence(std::string_view text);
SequenceSpec builtin_sequence(std::string_view kind, std::string_view params = {});

struct Violation {
  std::string rule;
  std::string witness;
  std::string message;
};

struct CandidacyReport {
  bool pass = true;
  std::vector<Violation> violations;
};

struct SolutionReport {
  bool pass = true;
  std::vector<Violation> violations;
  std::size_t checked_horizon = 0;
  long long checked_column = 1;
  std::size_t first_checked_time = 1;
  std::vector<std::uint64_t> generator_times;
  std::vector<std::uint64_t> mismatch_times;
};

// Rules: (a) initial configuration shape, (b) result is * iff mid is *,
// (c) (Q,Q,Q)->Q and (*,Q,Q)->Q present.
CandidacyReport check_candidate(const AutomatonSpec& ca);

// Compares the generator column p=1 with seq over t in [1, T]. Row 0 is the given
// initial configuration and is not checked.
// A missing transition becomes a violation with rule "missing-transition".
SolutionReport verify_solution(const AutomatonSpec& ca, const SequenceSpec& seq, std::size_t T);

// Times t in [1, T] at which column 1 holds the generator state.
std::vector<std::uint64_t> generator_times(const AutomatonSpec& ca, std::size_t T);

}  // namespace locasim

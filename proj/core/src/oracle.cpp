#include "locasim/oracle.hpp"

#include <stdexcept>

#include "locasim/diagram.hpp"

namespace locasim {

std::uint64_t enumerate_candidates(const EnumerationSpace& space,
                                   const std::function<bool(const AutomatonSpec&)>& sink) {
  const std::size_t s = space.states;
  if (s == 0) throw std::invalid_argument("need at least one state");
  if (s >= 3 && !space.allow_big) {
    throw std::invalid_argument("enumeration with 3 or more states needs the big-run flag");
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < s; ++i) names.push_back(std::to_string(i));
  names.emplace_back(Alphabet::kOutsideName);
  const Alphabet alphabet(names);
  const StateId star = alphabet.outside();

  std::uint64_t produced = 0;
  for (std::size_t b = 0; b < s; ++b) {
    for (std::size_t q = 0; q < s; ++q) {
      for (std::size_t g = 0; g < s; ++g) {
        const StateId Q = state_at(q);
        std::vector<Triple> free;
        for (std::size_t l = 0; l <= s; ++l) {
          for (std::size_t m = 0; m < s; ++m) {
            for (std::size_t r = 0; r < s; ++r) {
              const Triple t{state_at(l), state_at(m), state_at(r)};
              if (t == Triple{Q, Q, Q} || (space.pin_edge && t == Triple{star, Q, Q})) continue;
              free.push_back(t);
            }
          }
        }
        // Odometer over s^|free| assignments.
        std::vector<std::size_t> digit(free.size(), 0);
        while (true) {
          AutomatonSpec ca;
          ca.alphabet = alphabet;
          ca.boundary = state_at(b);
          ca.quiescent = Q;
          ca.generator = state_at(g);
          ca.table = StateTable(alphabet.size());
          ca.table.insert({Q, Q, Q}, Q);
          if (space.pin_edge) ca.table.insert({star, Q, Q}, Q);
          for (std::size_t i = 0; i < free.size(); ++i) ca.table.insert(free[i], state_at(digit[i]));
          ++produced;
          if (!sink(ca)) return produced;
          std::size_t i = 0;
          while (i < digit.size() && ++digit[i] == s) digit[i++] = 0;
          if (i == digit.size()) break;
        }
      }
    }
  }
  return produced;
}

std::vector<AutomatonSpec> enumerate_candidates(const EnumerationSpace& space) {
  std::vector<AutomatonSpec> out;
  enumerate_candidates(space, [&](const AutomatonSpec& ca) {
    out.push_back(ca);
    return true;
  });
  return out;
}

std::vector<SequenceSpec> classify_prefix(const std::vector<bool>& prefix) {
  std::vector<SequenceSpec> out;
  if (prefix.empty()) return out;
  const std::uint64_t T = prefix.size() - 1;
  auto matches = [&](const SequenceSpec& seq) {
    for (std::uint64_t t = 0; t <= T; ++t) {
      if (seq.contains(t) != prefix[t]) return false;
    }
    return true;
  };

  std::vector<std::uint64_t> members;
  for (std::uint64_t t = 0; t <= T; ++t) {
    if (prefix[t]) members.push_back(t);
  }
  if (members.size() >= 2) {
    const auto a = static_cast<std::int64_t>(members[1] - members[0]);
    const auto b = static_cast<std::int64_t>(members[0]) - a;
    const auto lin = SequenceSpec::linear(a, b);
    if (matches(lin)) out.push_back(lin);
  }
  for (SequenceKind k : {SequenceKind::cube, SequenceKind::square, SequenceKind::pow2,
                         SequenceKind::pow2_minus_1, SequenceKind::pow2_shift, SequenceKind::pow3,
                         SequenceKind::fibonacci, SequenceKind::primes}) {
    const auto seq = SequenceSpec::of(k);
    if (matches(seq)) out.push_back(seq);
  }
  return out;
}

std::vector<bool> generated_prefix(const AutomatonSpec& ca, std::size_t T) {
  const DiagramWindow w = run_diagram(ca, T);
  std::vector<bool> out(T + 1);
  for (std::size_t t = 1; t <= T; ++t) out[t] = w.at(t, 1) == ca.generator;
  return out;
}

std::string prefix_hex(const std::vector<bool>& prefix) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (std::size_t byte = 0; byte * 8 < prefix.size(); ++byte) {
    unsigned v = 0;
    for (std::size_t bit = 0; bit < 8 && byte * 8 + bit < prefix.size(); ++bit) {
      if (prefix[byte * 8 + bit]) v |= 1u << bit;
    }
    out += digits[v >> 4];
    out += digits[v & 15];
  }
  return out;
}

std::vector<CatalogEntry> build_catalog(const EnumerationSpace& space) {
  std::vector<CatalogEntry> out;
  enumerate_candidates(space, [&](const AutomatonSpec& ca) {
    CatalogEntry e{ca, generated_prefix(ca, space.horizon), {}};
    e.matches = classify_prefix(e.prefix);
    out.push_back(std::move(e));
    return true;
  });
  return out;
}

}  // namespace locasim

#include "locasim/rtsg.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "locasim/diagram.hpp"
#include "locasim/errors.hpp"

namespace locasim {

namespace {

bool is_prime(std::uint64_t t) {
  if (t < 2) return false;
  for (std::uint64_t d = 2; d * d <= t; ++d) {
    if (t % d == 0) return false;
  }
  return true;
}

bool is_power(std::uint64_t t, std::uint64_t base) {
  // t = base^n, n >= 1
  if (t < base) return false;
  while (t % base == 0) t /= base;
  return t == 1;
}

std::uint64_t icbrt(std::uint64_t t) {
  std::uint64_t r = 0;
  while ((r + 1) * (r + 1) * (r + 1) <= t) ++r;
  return r;
}

std::uint64_t isqrt(std::uint64_t t) {
  std::uint64_t r = 0;
  while ((r + 1) * (r + 1) <= t) ++r;
  return r;
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("bad integer '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> out;
  if (s.empty()) return out;
  std::size_t i = 0;
  while (true) {
    std::size_t j = s.find(',', i);
    out.push_back(s.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i));
    if (j == std::string_view::npos) break;
    i = j + 1;
  }
  return out;
}

}  // namespace

SequenceSpec SequenceSpec::of(SequenceKind kind) {
  if (kind == SequenceKind::linear || kind == SequenceKind::list) {
    throw std::invalid_argument("linear and list sequences need parameters");
  }
  SequenceSpec s;
  s.kind_ = kind;
  return s;
}

SequenceSpec SequenceSpec::linear(std::int64_t a, std::int64_t b) {
  if (a < 1) throw std::invalid_argument("linear sequence needs a >= 1");
  if (a + b < 1) throw std::invalid_argument("linear sequence must start at a positive time");
  SequenceSpec s;
  s.kind_ = SequenceKind::linear;
  s.a_ = a;
  s.b_ = b;
  return s;
}

SequenceSpec SequenceSpec::list(std::vector<std::uint64_t> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  SequenceSpec s;
  s.kind_ = SequenceKind::list;
  s.list_ = std::move(members);
  return s;
}

bool SequenceSpec::contains(std::uint64_t t) const {
  switch (kind_) {
    case SequenceKind::cube: {
      const auto r = icbrt(t);
      return r >= 1 && r * r * r == t;
    }
    case SequenceKind::square: {
      const auto r = isqrt(t);
      return r >= 1 && r * r == t;
    }
    case SequenceKind::pow2:
      return is_power(t, 2);
    case SequenceKind::pow2_minus_1:
      return is_power(t + 1, 2);
    case SequenceKind::pow2_shift:
      return t % 2 == 0 && is_power(t / 2 + 1, 2);
    case SequenceKind::pow3:
      return is_power(t, 3);
    case SequenceKind::fibonacci: {
      std::uint64_t x = 1, y = 2;
      while (x < t) {
        const auto z = x + y;
        x = y;
        y = z;
      }
      return x == t;
    }
    case SequenceKind::primes:
      return is_prime(t);
    case SequenceKind::linear: {
      const auto v = static_cast<std::int64_t>(t) - b_;
      return v >= a_ && v % a_ == 0;
    }
    case SequenceKind::list:
      return std::binary_search(list_.begin(), list_.end(), t);
  }
  return false;
}

std::vector<std::uint64_t> SequenceSpec::members_upto(std::uint64_t T) const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t t = 0; t <= T; ++t) {
    if (contains(t)) out.push_back(t);
  }
  return out;
}

std::vector<bool> SequenceSpec::prefix(std::uint64_t T) const {
  std::vector<bool> out(T + 1);
  for (std::uint64_t t = 0; t <= T; ++t) out[t] = contains(t);
  return out;
}

std::string SequenceSpec::name() const {
  switch (kind_) {
    case SequenceKind::cube: return "cube";
    case SequenceKind::square: return "square";
    case SequenceKind::pow2: return "pow2";
    case SequenceKind::pow2_minus_1: return "pow2-minus-1";
    case SequenceKind::pow2_shift: return "pow2-shift";
    case SequenceKind::pow3: return "pow3";
    case SequenceKind::fibonacci: return "fibonacci";
    case SequenceKind::primes: return "primes";
    case SequenceKind::linear: return "linear:" + std::to_string(a_) + "," + std::to_string(b_);
    case SequenceKind::list: {
      std::string s = "list:";
      for (std::size_t i = 0; i < list_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(list_[i]);
      }
      return s;
    }
  }
  return "?";
}

SequenceSpec parse_sequence(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const std::string_view params =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  return builtin_sequence(kind, params);
}

SequenceSpec builtin_sequence(std::string_view kind, std::string_view params) {
  static const std::pair<std::string_view, SequenceKind> plain[] = {
      {"cube", SequenceKind::cube},
      {"square", SequenceKind::square},
      {"pow2", SequenceKind::pow2},
      {"pow2-minus-1", SequenceKind::pow2_minus_1},
      {"pow2-shift", SequenceKind::pow2_shift},
      {"pow3", SequenceKind::pow3},
      {"fibonacci", SequenceKind::fibonacci},
      {"primes", SequenceKind::primes},
  };
  for (const auto& [n, k] : plain) {
    if (kind == n) {
      if (!params.empty()) throw std::invalid_argument(std::string(n) + " takes no parameters");
      return SequenceSpec::of(k);
    }
  }
  if (kind == "linear") {
    const auto parts = split_commas(params);
    if (parts.size() != 2) throw std::invalid_argument("linear expects linear:A,B");
    return SequenceSpec::linear(parse_int(parts[0]), parse_int(parts[1]));
  }
  if (kind == "list") {
    std::vector<std::uint64_t> ms;
    for (auto p : split_commas(params)) {
      const auto v = parse_int(p);
      if (v < 0) throw std::invalid_argument("list members must be non-negative");
      ms.push_back(static_cast<std::uint64_t>(v));
    }
    return SequenceSpec::list(std::move(ms));
  }
  throw std::invalid_argument("unknown sequence kind '" + std::string(kind) + "'");
}

CandidacyReport check_candidate(const AutomatonSpec& ca) {
  CandidacyReport rep;
  const Alphabet& a = ca.alphabet;
  const StateId star = ca.outside();
  auto fail = [&](std::string rule, std::string witness, std::string msg) {
    rep.violations.push_back({std::move(rule), std::move(witness), std::move(msg)});
  };

  const std::size_t n = a.size();
  bool roles_ok = true;
  for (auto [s, role] : {std::pair{ca.boundary, "boundary"}, std::pair{ca.quiescent, "quiescent"},
                         std::pair{ca.generator, "generator"}}) {
    if (index(s) >= n || s == star) {
      fail("a", role, std::string(role) + " state must be a non-outside state");
      roles_ok = false;
    }
  }
  if (ca.table.alphabet_size() != n) {
    fail("a", "table", "table does not match alphabet");
    rep.pass = false;
    return rep;
  }

  for (const auto& [t, r] : ca.table.entries()) {
    if ((t.mid == star) != (r == star)) {
      fail("b", format_triple(a, t) + " -> " + a.name(r),
           t.mid == star ? "outside cell must stay outside" : "inner cell must not become outside");
    }
  }

  if (roles_ok) {
    const StateId q = ca.quiescent;
    for (const Triple& t : {Triple{q, q, q}, Triple{star, q, q}}) {
      auto r = ca.table.find(t);
      if (!r) {
        fail("c", format_triple(a, t), "quiescent entry missing");
      } else if (*r != q) {
        fail("c", format_triple(a, t) + " -> " + a.name(*r), "quiescent entry must yield Q");
      }
    }
  }
  rep.pass = rep.violations.empty();
  return rep;
}

std::vector<std::uint64_t> generator_times(const AutomatonSpec& ca, std::size_t T) {
  const DiagramWindow w = run_diagram(ca, T);
  std::vector<std::uint64_t> out;
  for (std::size_t t = 1; t <= T; ++t) {
    if (w.at(t, 1) == ca.generator) out.push_back(t);
  }
  return out;
}

SolutionReport verify_solution(const AutomatonSpec& ca, const SequenceSpec& seq, std::size_t T) {
  SolutionReport rep;
  rep.checked_horizon = T;
  rep.checked_column = 1;
  DiagramWindow w;
  try {
    w = run_diagram(ca, T);
  } catch (const MissingTransition& e) {
    rep.violations.push_back({"missing-transition", format_triple(ca.alphabet, e.triple()),
                              e.what()});
    rep.pass = false;
    return rep;
  }
  for (std::size_t t = rep.first_checked_time; t <= T; ++t) {
    const bool gen = w.at(t, 1) == ca.generator;
    if (gen) rep.generator_times.push_back(t);
    if (gen != seq.contains(t)) {
      rep.mismatch_times.push_back(t);
      rep.violations.push_back({"sequence", "t=" + std::to_string(t),
                                gen ? "generator state at a time outside the sequence"
                                    : "generator state missing at a sequence time"});
    }
  }
  rep.pass = rep.violations.empty();
  return rep;
}

}  // namespace locasim

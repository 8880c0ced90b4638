#include "locasim/localmap.hpp"

#include <algorithm>
#include <unordered_map>

#include "locasim/ca_io.hpp"
#include "locasim/errors.hpp"

namespace locasim {

namespace {

std::size_t slot_of(const Triple& t, std::size_t n) {
  return (index(t.left) * n + index(t.mid)) * n + index(t.right);
}

std::uint32_t pack5(const std::array<StateId, 5>& q) {
  std::uint32_t k = 0;
  for (StateId s : q) k = (k << 6) | static_cast<std::uint32_t>(index(s));
  return k;
}

}  // namespace

LocalMapping::LocalMapping(AutomatonSpec source, Alphabet targets, StateId target_boundary,
                           StateId target_quiescent, StateId target_generator)
    : source_(std::move(source)),
      targets_(std::move(targets)),
      boundary_(target_boundary),
      quiescent_(target_quiescent),
      generator_(target_generator) {
  const std::size_t n = source_.alphabet.size();
  const std::size_t nx = targets_.size();
  for (StateId s : {boundary_, quiescent_, generator_}) {
    if (index(s) >= nx || s == targets_.outside()) {
      throw MappingError("target roles must be non-outside target states");
    }
  }
  zmap_.assign(n, std::nullopt);
  slot_to_entry_.assign(n * n * n, -1);
  for (const auto& [t, r] : source_.table.entries()) {
    if (t.mid == source_.outside()) continue;
    slot_to_entry_[slot_of(t, n)] = static_cast<std::int32_t>(domain_.size());
    domain_.push_back(t);
  }
  values_.assign(domain_.size(), targets_.outside());
}

std::vector<StateId> LocalMapping::zmap_domain() const {
  std::vector<StateId> d{source_.outside(), source_.boundary, source_.quiescent};
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  return d;
}

std::optional<StateId> LocalMapping::zmap(StateId source_state) const {
  if (index(source_state) >= zmap_.size()) return std::nullopt;
  return zmap_[index(source_state)];
}

void LocalMapping::set_zmap(StateId source_state, StateId target) {
  const auto d = zmap_domain();
  if (std::find(d.begin(), d.end(), source_state) == d.end()) {
    throw MappingError("zmap is only defined on the initial states *, B and Q");
  }
  if (index(target) >= targets_.size()) throw MappingError("zmap target out of range");
  zmap_[index(source_state)] = target;
}

std::optional<std::size_t> LocalMapping::entry_index(const Triple& t) const {
  const std::size_t n = source_.alphabet.size();
  if (index(t.left) >= n || index(t.mid) >= n || index(t.right) >= n) return std::nullopt;
  const auto e = slot_to_entry_[slot_of(t, n)];
  if (e < 0) return std::nullopt;
  return static_cast<std::size_t>(e);
}

StateId LocalMapping::image(const Triple& t) const {
  if (t.mid == source_.outside()) return targets_.outside();
  auto e = entry_index(t);
  if (!e) {
    throw MappingError("source triple " + format_triple(source_.alphabet, t) +
                       " is outside the mapping domain");
  }
  return values_[*e];
}

SuperTransitionSet collect_supers(const AutomatonSpec& ca, std::size_t T_max, std::size_t W) {
  SuperTransitionSet sup;
  sup.horizon = T_max;
  sup.window = W;
  // One extra row so that every harvested result triple is known to be defined.
  const DiagramWindow w = run_diagram(ca, T_max + 1);
  const auto width = static_cast<long long>(w.width());

  for (long long p = -1; p <= width + 1; ++p) {
    sup.initial_triples.push_back({w.at(0, p - 1), w.at(0, p), w.at(0, p + 1)});
  }
  std::sort(sup.initial_triples.begin(), sup.initial_triples.end());
  sup.initial_triples.erase(std::unique(sup.initial_triples.begin(), sup.initial_triples.end()),
                            sup.initial_triples.end());

  std::unordered_map<std::uint32_t, SuperRecord> seen;
  for (std::size_t t = 0; t < T_max; ++t) {
    for (long long p = 1; p <= width + 2; ++p) {
      SuperRecord rec;
      for (int i = 0; i < 5; ++i) rec.q[i] = w.at(t, p - 2 + i);
      for (int i = 0; i < 3; ++i) rec.r[i] = w.at(t + 1, p - 1 + i);
      if (seen.emplace(pack5(rec.q), rec).second) sup.saturated_at = t;
    }
  }
  sup.quints.reserve(seen.size());
  for (auto& [k, rec] : seen) sup.quints.push_back(rec);
  std::sort(sup.quints.begin(), sup.quints.end());
  return sup;
}

LocalMapping identity_mapping(const AutomatonSpec& ca) {
  LocalMapping m(ca, ca.alphabet, ca.boundary, ca.quiescent, ca.generator);
  for (StateId s : m.zmap_domain()) m.set_zmap(s, s);
  for (std::size_t e = 0; e < m.domain_size(); ++e) {
    m.set_value(e, *ca.table.find(m.domain()[e]));
  }
  return m;
}

LocalRelation induce_relation(const LocalMapping& m, const SuperTransitionSet& sup) {
  LocalRelation rel;
  const StateId star = m.source().outside();
  auto z = [&](StateId s) {
    auto v = m.zmap(s);
    if (!v) throw MappingError("zmap undefined for " + m.source().alphabet.name(s));
    return *v;
  };
  for (const Triple& t : sup.initial_triples) {
    if (t.mid == star) continue;
    rel.add({z(t.left), z(t.mid), z(t.right)}, m.image(t));
  }
  for (const SuperRecord& rec : sup.quints) {
    rel.add({m.image(rec.window(0)), m.image(rec.window(1)), m.image(rec.window(2))},
            m.image(rec.result()));
  }
  return rel;
}

DiagramWindow apply_mapping_to_window(const LocalMapping& m, const DiagramWindow& w) {
  const std::size_t T = w.horizon();
  DiagramWindow out(T + 1, T + 3, m.target_outside());
  auto z = [&](StateId s) {
    auto v = m.zmap(s);
    if (!v) throw MappingError("zmap undefined for " + m.source().alphabet.name(s));
    return *v;
  };
  for (std::size_t p = 1; p <= out.width(); ++p) {
    out.set(0, static_cast<long long>(p), z(w.at(0, static_cast<long long>(p))));
  }
  out.set_tail(0, z(w.tail(0)));
  for (std::size_t t = 0; t <= T; ++t) {
    for (std::size_t p = 1; p <= out.width(); ++p) {
      const auto pp = static_cast<long long>(p);
      out.set(t + 1, pp, m.image({w.at(t, pp - 1), w.at(t, pp), w.at(t, pp + 1)}));
    }
    const StateId tail = w.tail(t);
    out.set_tail(t + 1, m.image({tail, tail, tail}));
  }
  return out;
}

DeterminismReport is_local_simulation(const LocalMapping& m, const SuperTransitionSet& sup) {
  return is_deterministic(induce_relation(m, sup));
}

ComplianceReport check_compliance(const LocalMapping& m) {
  ComplianceReport rep;
  const AutomatonSpec& src = m.source();
  const Alphabet& sa = src.alphabet;
  const Alphabet& ta = m.targets();
  auto entry = [&](std::size_t e) {
    return format_triple(sa, m.domain()[e]) + " -> " + ta.name(m.value(e));
  };

  auto& c0 = rep.conditions[0];
  for (auto [s, want] : {std::pair{src.outside(), m.target_outside()},
                         std::pair{src.boundary, m.target_boundary()},
                         std::pair{src.quiescent, m.target_quiescent()}}) {
    auto got = m.zmap(s);
    if (!got || *got != want) {
      c0.witnesses.push_back("zmap " + sa.name(s) + " -> " + (got ? ta.name(*got) : "?") +
                             ", expected " + ta.name(want));
    }
  }

  auto& c1 = rep.conditions[1];
  auto& c2 = rep.conditions[2];
  for (std::size_t e = 0; e < m.domain_size(); ++e) {
    const Triple& t = m.domain()[e];
    if (m.value(e) == m.target_outside()) c1.witnesses.push_back(entry(e));
    if (t.left == src.outside()) {
      const bool src_gen = *src.table.find(t) == src.generator;
      const bool dst_gen = m.value(e) == m.target_generator();
      if (src_gen != dst_gen) c2.witnesses.push_back(entry(e));
    }
  }

  auto& c3 = rep.conditions[3];
  const StateId q = src.quiescent;
  for (const Triple& t : {Triple{q, q, q}, Triple{src.outside(), q, q}}) {
    auto e = m.entry_index(t);
    if (!e) {
      c3.witnesses.push_back(format_triple(sa, t) + " missing");
    } else if (m.value(*e) != m.target_quiescent()) {
      c3.witnesses.push_back(entry(*e));
    }
  }

  rep.pass = true;
  for (auto& c : rep.conditions) {
    c.pass = c.witnesses.empty();
    rep.pass = rep.pass && c.pass;
  }
  return rep;
}

AutomatonSpec simulated_ca_unchecked(const LocalMapping& m, const SuperTransitionSet& sup) {
  const LocalRelation rel = induce_relation(m, sup);
  auto det = is_deterministic(rel);
  if (!det.deterministic) {
    const auto& c = det.conflicts.front();
    throw NonDeterministic("mapping is not a local simulation: " +
                           std::to_string(det.conflicts.size()) + " conflicting triples, first " +
                           format_triple(m.targets(), c.triple));
  }
  AutomatonSpec ca;
  ca.alphabet = m.targets();
  ca.boundary = m.target_boundary();
  ca.quiescent = m.target_quiescent();
  ca.generator = m.target_generator();
  ca.table = relation_to_table(rel, ca.alphabet.size());
  return ca;
}

AutomatonSpec build_simulated_ca(const LocalMapping& m, const SuperTransitionSet& sup) {
  const ComplianceReport rep = check_compliance(m);
  if (!rep.pass) {
    for (std::size_t i = 0; i < rep.conditions.size(); ++i) {
      if (!rep.conditions[i].pass) {
        throw NonCompliant("condition (" + std::to_string(i) + ") fails: " +
                           rep.conditions[i].witnesses.front());
      }
    }
  }
  AutomatonSpec ca = simulated_ca_unchecked(m, sup);
  const StateId q = ca.quiescent;
  ca.table.insert({q, q, q}, q);
  ca.table.insert({ca.outside(), q, q}, q);
  return ca;
}

LocalMapping handcraft_script(const AutomatonSpec& seed, const MappingPatch& patch) {
  const Alphabet& sa = seed.alphabet;
  auto need = [&](const char* name) {
    auto s = sa.find(name);
    if (!s) throw MappingError(std::string("handcraft seed lacks state ") + name);
    return *s;
  };
  const StateId A = need("A");
  for (const char* n : {"Q", "B", "C", "D", "E"}) need(n);
  if (sa.size() != 7) throw MappingError("handcraft seed must have exactly the states Q B A C D E");
  if (seed.generator != A || seed.boundary != need("B") || seed.quiescent != need("Q")) {
    throw MappingError("handcraft seed roles must be boundary B, quiescent Q, generator A");
  }

  Alphabet targets({"Q", "B", "C", "D", "E", "*"});
  auto tgt = [&](const std::string& name) { return *targets.find(name); };
  LocalMapping m(seed, targets, tgt("B"), tgt("Q"), tgt("D"));
  for (StateId s : m.zmap_domain()) m.set_zmap(s, tgt(sa.name(s)));
  for (std::size_t e = 0; e < m.domain_size(); ++e) {
    const Triple& t = m.domain()[e];
    const StateId r = *seed.table.find(t);
    if (r == A) {
      m.set_value(e, tgt(t.left == seed.outside() ? "D" : "E"));
    } else {
      m.set_value(e, tgt(sa.name(r)));
    }
  }
  apply_patch(m, patch);
  return m;
}

std::string format_mapping(const LocalMapping& m) {
  const Alphabet& sa = m.source().alphabet;
  const Alphabet& ta = m.targets();
  std::string out = "targets:";
  for (StateId s : ta.inner_states()) out += " " + ta.name(s);
  out += "\nboundary: " + ta.name(m.target_boundary()) + "\n";
  out += "quiescent: " + ta.name(m.target_quiescent()) + "\n";
  out += "generator: " + ta.name(m.target_generator()) + "\n";
  for (StateId s : m.zmap_domain()) {
    if (auto v = m.zmap(s)) out += "zmap: " + sa.name(s) + " -> " + ta.name(*v) + "\n";
  }
  for (std::size_t e = 0; e < m.domain_size(); ++e) {
    out += "smap: " + format_triple(sa, m.domain()[e]) + " -> " + ta.name(m.value(e)) + "\n";
  }
  return out;
}

namespace {

struct MappingLines {
  std::vector<std::string> targets;
  std::optional<std::string> boundary, quiescent, generator;
  struct Z {
    std::size_t line;
    std::string src, dst;
  };
  struct S {
    std::size_t line;
    std::string l, m, r, dst;
  };
  std::vector<Z> z;
  std::vector<S> s;
  bool has_targets = false;
};

MappingLines read_mapping_lines(std::string_view text, const std::string& name, bool patch) {
  MappingLines ml;
  std::size_t lineno = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    auto toks = detail::tokenize_line(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++lineno;
    if (toks.empty()) continue;
    const std::string& head = toks[0];
    auto single = [&](std::optional<std::string>& slot) {
      if (patch) throw ParseError(name, lineno, "patch files hold only zmap/smap lines");
      if (toks.size() != 2 || slot) throw ParseError(name, lineno, "bad " + head + " line");
      slot = toks[1];
    };
    if (head == "targets:") {
      if (patch || ml.has_targets) throw ParseError(name, lineno, "unexpected targets line");
      ml.has_targets = true;
      ml.targets.assign(toks.begin() + 1, toks.end());
    } else if (head == "boundary:") {
      single(ml.boundary);
    } else if (head == "quiescent:") {
      single(ml.quiescent);
    } else if (head == "generator:") {
      single(ml.generator);
    } else if (head == "zmap:" && toks.size() == 4 && toks[2] == "->") {
      ml.z.push_back({lineno, toks[1], toks[3]});
    } else if (head == "smap:" && toks.size() == 6 && toks[4] == "->") {
      ml.s.push_back({lineno, toks[1], toks[2], toks[3], toks[5]});
    } else {
      throw ParseError(name, lineno, "unrecognized line");
    }
  }
  return ml;
}

MappingPatch resolve_lines(const MappingLines& ml, const LocalMapping& base, const std::string& name,
                           bool require_total) {
  const Alphabet& sa = base.source().alphabet;
  const Alphabet& ta = base.targets();
  auto src = [&](const std::string& n, std::size_t line) {
    auto s = sa.find(n);
    if (!s) throw ParseError(name, line, "unknown source state '" + n + "'");
    return *s;
  };
  auto dst = [&](const std::string& n, std::size_t line) {
    auto s = ta.find(n);
    if (!s) throw ParseError(name, line, "unknown target state '" + n + "'");
    return *s;
  };
  MappingPatch p;
  std::vector<bool> seen_entry(base.domain_size(), false);
  std::vector<bool> seen_z(sa.size(), false);
  for (const auto& z : ml.z) {
    const StateId s = src(z.src, z.line);
    if (seen_z[index(s)]) throw ParseError(name, z.line, "duplicate zmap for " + z.src);
    seen_z[index(s)] = true;
    const auto d = base.zmap_domain();
    if (std::find(d.begin(), d.end(), s) == d.end()) {
      throw ParseError(name, z.line, "zmap source must be *, B or Q");
    }
    p.zmap.emplace_back(s, dst(z.dst, z.line));
  }
  for (const auto& e : ml.s) {
    const Triple t{src(e.l, e.line), src(e.m, e.line), src(e.r, e.line)};
    auto idx = base.entry_index(t);
    if (!idx) throw ParseError(name, e.line, "smap triple is not a source table entry");
    if (seen_entry[*idx]) throw ParseError(name, e.line, "duplicate smap entry");
    seen_entry[*idx] = true;
    p.smap.emplace_back(t, dst(e.dst, e.line));
  }
  if (require_total) {
    for (StateId s : base.zmap_domain()) {
      if (!seen_z[index(s)]) throw ParseError(name, 0, "zmap missing for " + sa.name(s));
    }
    for (std::size_t i = 0; i < seen_entry.size(); ++i) {
      if (!seen_entry[i]) {
        throw ParseError(name, 0, "smap missing for " + format_triple(sa, base.domain()[i]));
      }
    }
  }
  return p;
}

}  // namespace

LocalMapping parse_mapping(std::string_view text, const AutomatonSpec& source,
                           const std::string& name) {
  const MappingLines ml = read_mapping_lines(text, name, false);
  if (!ml.has_targets) throw ParseError(name, 0, "missing targets line");
  if (!ml.boundary || !ml.quiescent || !ml.generator) {
    throw ParseError(name, 0, "missing target role line (boundary, quiescent, generator)");
  }
  std::vector<std::string> names;
  for (const auto& n : ml.targets) {
    if (n != Alphabet::kOutsideName) names.push_back(n);
  }
  names.emplace_back(Alphabet::kOutsideName);
  Alphabet targets;
  try {
    targets = Alphabet(std::move(names));
  } catch (const InvalidAutomaton& e) {
    throw ParseError(name, 0, e.what());
  }
  auto role = [&](const std::string& n) {
    auto s = targets.find(n);
    if (!s || *s == targets.outside()) throw ParseError(name, 0, "bad target role '" + n + "'");
    return *s;
  };
  LocalMapping m(source, targets, role(*ml.boundary), role(*ml.quiescent), role(*ml.generator));
  apply_patch(m, resolve_lines(ml, m, name, true));
  return m;
}

LocalMapping load_mapping(const std::filesystem::path& path, const AutomatonSpec& source) {
  return parse_mapping(detail::read_file(path), source, path.string());
}

void save_mapping(const LocalMapping& m, const std::filesystem::path& path) {
  detail::write_file(path, format_mapping(m));
}

MappingPatch parse_patch(std::string_view text, const LocalMapping& base, const std::string& name) {
  return resolve_lines(read_mapping_lines(text, name, true), base, name, false);
}

MappingPatch load_patch(const std::filesystem::path& path, const LocalMapping& base) {
  return parse_patch(detail::read_file(path), base, path.string());
}

void apply_patch(LocalMapping& m, const MappingPatch& patch) {
  for (const auto& [s, d] : patch.zmap) m.set_zmap(s, d);
  for (const auto& [t, d] : patch.smap) {
    auto e = m.entry_index(t);
    if (!e) throw MappingError("patch triple " + format_triple(m.source().alphabet, t) +
                               " is outside the mapping domain");
    if (index(d) >= m.targets().size()) throw MappingError("patch target out of range");
    m.set_value(*e, d);
  }
}

}  // namespace locasim

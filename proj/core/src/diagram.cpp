#include "locasim/diagram.hpp"

#include "locasim/errors.hpp"

namespace locasim {

DiagramWindow::DiagramWindow(std::size_t horizon, std::size_t width, StateId outside)
    : horizon_(horizon),
      width_(width),
      outside_(outside),
      cells_((horizon + 1) * width, outside),
      tail_(horizon + 1, outside) {}

DiagramWindow run_diagram(const AutomatonSpec& ca, std::size_t T) {
  ca.validate();
  const std::size_t width = T + 2;
  DiagramWindow w(T, width, ca.outside());
  for (std::size_t t = 0; t <= T; ++t) w.set_tail(t, ca.quiescent);
  w.set(0, 1, ca.boundary);
  for (std::size_t p = 2; p <= width; ++p) w.set(0, static_cast<long long>(p), ca.quiescent);

  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t p = 1; p <= width; ++p) {
      const auto pp = static_cast<long long>(p);
      const Triple tr{w.at(t, pp - 1), w.at(t, pp), w.at(t, pp + 1)};
      auto r = ca.table.find(tr);
      if (!r) {
        throw MissingTransition(tr, t, pp,
                                "missing transition " + format_triple(ca.alphabet, tr) + " at t=" +
                                    std::to_string(t) + " p=" + std::to_string(p));
      }
      w.set(t + 1, pp, *r);
    }
  }
  return w;
}

bool satisfies_light_cone(const DiagramWindow& w, StateId quiescent) {
  for (std::size_t t = 0; t <= w.horizon(); ++t) {
    for (std::size_t p = t + 2; p <= w.width(); ++p) {
      if (w.at(t, static_cast<long long>(p)) != quiescent) return false;
    }
  }
  return true;
}

LocalRelation extract_relation(const DiagramWindow& w) {
  LocalRelation rel;
  for (std::size_t t = 0; t < w.horizon(); ++t) {
    for (std::size_t p = 1; p <= w.width(); ++p) {
      const auto pp = static_cast<long long>(p);
      rel.add({w.at(t, pp - 1), w.at(t, pp), w.at(t, pp + 1)}, w.at(t + 1, pp));
    }
  }
  return rel;
}

LocalRelation extract_relation(std::span<const DiagramWindow> windows) {
  LocalRelation rel;
  for (const auto& w : windows) rel.merge(extract_relation(w));
  return rel;
}

DeterminismReport is_deterministic(const LocalRelation& rel) {
  DeterminismReport rep;
  const auto& es = rel.entries();
  // Entries are ordered by triple, so results for one triple are adjacent.
  for (auto it = es.begin(); it != es.end();) {
    auto next = std::next(it);
    if (next != es.end() && next->first == it->first) {
      Conflict c{it->first, {it->second}};
      while (next != es.end() && next->first == it->first) {
        c.results.push_back(next->second);
        ++next;
      }
      rep.conflicts.push_back(std::move(c));
    }
    it = next;
  }
  rep.deterministic = rep.conflicts.empty();
  return rep;
}

StateTable relation_to_table(const LocalRelation& rel, std::size_t alphabet_size) {
  StateTable table(alphabet_size);
  for (const auto& [t, r] : rel.entries()) {
    if (!table.insert(t, r)) throw NonDeterministic("relation is not functional");
  }
  return table;
}

}  // namespace locasim

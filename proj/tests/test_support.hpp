#pragma once

#include <filesystem>
#include <string>

#include "locasim/ca_io.hpp"
#include "locasim/localmap.hpp"

#ifndef LOCASIM_DATA_DIR
#error "LOCASIM_DATA_DIR must point at the data directory"
#endif

namespace locasim::test {

inline std::filesystem::path data(const std::string& name) {
  return std::filesystem::path(LOCASIM_DATA_DIR) / name;
}

inline const AutomatonSpec& seed6() {
  static const AutomatonSpec ca = load_ca(data("cube6.ca"));
  return ca;
}

inline const LocalMapping& handcrafted_mapping() {
  static const LocalMapping m = [] {
    LocalMapping base = handcraft_script(seed6());
    apply_patch(base, load_patch(data("handcraft.patch"), base));
    return base;
  }();
  return m;
}

inline const AutomatonSpec& solution5() {
  static const AutomatonSpec ca = [] {
    const auto sup = collect_supers(seed6(), 400, 100);
    return build_simulated_ca(handcrafted_mapping(), sup);
  }();
  return ca;
}

// B = Q = S: every cell stays in the single state.
inline AutomatonSpec one_state() {
  return parse_ca(
      "states: S\noutside: *\nboundary: S\nquiescent: S\ngenerator: S\n"
      "S S S -> S\n* S S -> S\n");
}

}  // namespace locasim::test

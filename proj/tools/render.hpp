#pragma once

#include <map>
#include <string>

#include "locasim/automaton.hpp"
#include "locasim/diagram.hpp"

namespace locasim::tools {

// State name -> glyph. Names not listed get their first character when that is
// free, otherwise the next unused printable character.
std::map<std::string, char> resolve_glyphs(const Alphabet& alphabet, const std::string& spec);

// One line per time step, one character per cell p = 1..width.
std::string render_text(const DiagramWindow& w, const Alphabet& alphabet,
                        const std::map<std::string, char>& glyphs);

// Binary PPM (P6), each cell a cell x cell square.
std::string render_ppm(const DiagramWindow& w, const Alphabet& alphabet, unsigned cell);

}  // namespace locasim::tools

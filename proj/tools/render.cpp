#include "render.hpp"

#include <set>
#include <stdexcept>

#include "locasim/ca_io.hpp"

namespace locasim::tools {

std::map<std::string, char> resolve_glyphs(const Alphabet& alphabet, const std::string& spec) {
  std::map<std::string, char> out;
  std::set<char> used;
  // spec: comma separated NAME=C pairs
  std::size_t i = 0;
  while (i < spec.size()) {
    std::size_t j = spec.find(',', i);
    if (j == std::string::npos) j = spec.size();
    const std::string item = spec.substr(i, j - i);
    i = j + 1;
    if (item.empty()) continue;
    const auto eq = item.rfind('=');
    if (eq == std::string::npos || eq + 2 != item.size()) {
      throw std::invalid_argument("glyph '" + item + "' is not NAME=C");
    }
    const std::string name = item.substr(0, eq);
    if (!alphabet.find(name)) throw std::invalid_argument("glyph for unknown state '" + name + "'");
    const char c = item[eq + 1];
    if (!used.insert(c).second) throw std::invalid_argument("glyph map is not injective");
    out[name] = c;
  }
  for (const auto& name : alphabet.names()) {
    if (out.count(name)) continue;
    char c = name[0];
    if (used.count(c)) {
      c = 0;
      for (char k = '!'; k <= '~'; ++k) {
        if (!used.count(k)) {
          c = k;
          break;
        }
      }
      if (!c) throw std::invalid_argument("ran out of glyphs");
    }
    used.insert(c);
    out[name] = c;
  }
  return out;
}

std::string render_text(const DiagramWindow& w, const Alphabet& alphabet,
                        const std::map<std::string, char>& glyphs) {
  std::string out;
  out.reserve((w.horizon() + 1) * (w.width() + 1));
  for (std::size_t t = 0; t <= w.horizon(); ++t) {
    for (std::size_t p = 1; p <= w.width(); ++p) {
      out += glyphs.at(alphabet.name(w.at(t, static_cast<long long>(p))));
    }
    out += '\n';
  }
  return out;
}

std::string render_ppm(const DiagramWindow& w, const Alphabet& alphabet, unsigned cell) {
  if (cell == 0) throw std::invalid_argument("cell size must be positive");
  static const unsigned char palette[][3] = {
      {245, 245, 245}, {30, 30, 30},   {220, 50, 47},  {38, 139, 210}, {133, 153, 0},
      {181, 137, 0},   {108, 113, 196}, {42, 161, 152}, {211, 54, 130}, {203, 75, 22},
  };
  const std::size_t npal = sizeof(palette) / sizeof(palette[0]);
  const std::size_t width = w.width() * cell;
  const std::size_t height = (w.horizon() + 1) * cell;
  std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  const std::size_t q = alphabet.find("Q") ? index(*alphabet.find("Q")) : npal;
  for (std::size_t t = 0; t <= w.horizon(); ++t) {
    std::string line;
    for (std::size_t p = 1; p <= w.width(); ++p) {
      const std::size_t s = index(w.at(t, static_cast<long long>(p)));
      // Quiescent cells stay light; the others cycle through the palette.
      const unsigned char* rgb = s == q ? palette[0] : palette[1 + s % (npal - 1)];
      for (unsigned k = 0; k < cell; ++k) line.append(reinterpret_cast<const char*>(rgb), 3);
    }
    for (unsigned k = 0; k < cell; ++k) out += line;
  }
  return out;
}

}  // namespace locasim::tools

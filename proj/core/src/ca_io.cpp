#include "locasim/ca_io.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include "locasim/errors.hpp"

namespace locasim {

namespace detail {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<std::string> tokenize_line(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace detail

namespace {

struct PendingEntry {
  std::size_t line;
  std::string l, m, r, res;
};

}  // namespace

AutomatonSpec parse_ca(std::string_view text, const std::string& source) {
  std::optional<std::vector<std::string>> states;
  std::optional<std::string> outside, boundary, quiescent, generator;
  std::vector<PendingEntry> pending;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineno;

    auto toks = detail::tokenize_line(line);
    if (toks.empty()) continue;
    const std::string& head = toks[0];
    auto single = [&](std::optional<std::string>& slot, const char* key) {
      if (toks.size() != 2) throw ParseError(source, lineno, std::string(key) + " expects one name");
      if (slot) throw ParseError(source, lineno, std::string("repeated ") + key + " header");
      slot = toks[1];
    };
    if (head == "states:") {
      if (states) throw ParseError(source, lineno, "repeated states header");
      states.emplace(toks.begin() + 1, toks.end());
    } else if (head == "outside:") {
      single(outside, "outside:");
    } else if (head == "boundary:") {
      single(boundary, "boundary:");
    } else if (head == "quiescent:") {
      single(quiescent, "quiescent:");
    } else if (head == "generator:") {
      single(generator, "generator:");
    } else if (toks.size() == 5 && toks[3] == "->") {
      pending.push_back({lineno, toks[0], toks[1], toks[2], toks[4]});
    } else {
      throw ParseError(source, lineno, "unrecognized line");
    }
  }

  if (!states) throw ParseError(source, 0, "missing states header");
  if (!outside || !boundary || !quiescent || !generator) {
    throw ParseError(source, 0, "missing role header (outside, boundary, quiescent, generator)");
  }
  if (*outside != Alphabet::kOutsideName) {
    throw ParseError(source, 0, "outside state must be named '*'");
  }

  std::vector<std::string> names;
  names.reserve(states->size() + 1);
  // The outside state is always stored last, whether or not it is listed.
  for (const auto& n : *states) {
    if (n != Alphabet::kOutsideName) names.push_back(n);
  }
  names.emplace_back(Alphabet::kOutsideName);

  AutomatonSpec ca;
  try {
    ca.alphabet = Alphabet(std::move(names));
  } catch (const InvalidAutomaton& e) {
    throw ParseError(source, 0, e.what());
  }
  auto lookup = [&](const std::string& name, std::size_t line) {
    auto s = ca.alphabet.find(name);
    if (!s) throw ParseError(source, line, "unknown state '" + name + "'");
    return *s;
  };
  ca.boundary = lookup(*boundary, 0);
  ca.quiescent = lookup(*quiescent, 0);
  ca.generator = lookup(*generator, 0);
  ca.table = StateTable(ca.alphabet.size());
  for (const auto& e : pending) {
    const Triple t{lookup(e.l, e.line), lookup(e.m, e.line), lookup(e.r, e.line)};
    if (!ca.table.insert(t, lookup(e.res, e.line))) {
      throw ParseError(source, e.line, "duplicate entry for " + e.l + " " + e.m + " " + e.r);
    }
  }
  try {
    ca.validate();
  } catch (const InvalidAutomaton& e) {
    throw ParseError(source, 0, e.what());
  }
  return ca;
}

AutomatonSpec load_ca(const std::filesystem::path& path) {
  return parse_ca(detail::read_file(path), path.string());
}

std::string format_ca(const AutomatonSpec& ca) {
  const Alphabet& a = ca.alphabet;
  std::string out = "states:";
  for (StateId s : a.inner_states()) out += " " + a.name(s);
  out += "\noutside: *\n";
  out += "boundary: " + a.name(ca.boundary) + "\n";
  out += "quiescent: " + a.name(ca.quiescent) + "\n";
  out += "generator: " + a.name(ca.generator) + "\n";
  for (const auto& [t, r] : ca.table.entries()) {
    out += format_triple(a, t) + " -> " + a.name(r) + "\n";
  }
  return out;
}

void save_ca(const AutomatonSpec& ca, const std::filesystem::path& path) {
  detail::write_file(path, format_ca(ca));
}

}  // namespace locasim

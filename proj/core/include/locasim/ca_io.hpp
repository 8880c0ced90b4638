#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "locasim/automaton.hpp"

namespace locasim {

// Parses the CA text format. Throws ParseError naming `source` and the line.
AutomatonSpec parse_ca(std::string_view text, const std::string& source = "<string>");
AutomatonSpec load_ca(const std::filesystem::path& path);

// Canonical text form: header lines then entries in table order.
// parse_ca(format_ca(ca)) == ca.
std::string format_ca(const AutomatonSpec& ca);
void save_ca(const AutomatonSpec& ca, const std::filesystem::path& path);

namespace detail {
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view data);
// Splits on whitespace after dropping a trailing `#` comment.
std::vector<std::string> tokenize_line(std::string_view line);
}  // namespace detail

}  // namespace locasim

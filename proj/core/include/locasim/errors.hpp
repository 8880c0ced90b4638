#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "locasim/automaton.hpp"

namespace locasim {

// Malformed text input. line is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

// A reachable local configuration has no table entry.
class MissingTransition : public std::runtime_error {
 public:
  MissingTransition(Triple triple, std::size_t t, long long p, const std::string& what)
      : std::runtime_error(what), triple_(triple), t_(t), p_(p) {}

  const Triple& triple() const noexcept { return triple_; }
  std::size_t time() const noexcept { return t_; }
  long long position() const noexcept { return p_; }

 private:
  Triple triple_;
  std::size_t t_;
  long long p_;
};

class NonDeterministic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonCompliant : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MappingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace locasim

#include "doctest.h"
#include "locasim/ca_io.hpp"
#include "locasim/errors.hpp"
#include "test_support.hpp"

using namespace locasim;

TEST_CASE("alphabet rejects duplicates and a missing outside state") {
  CHECK_THROWS_AS(Alphabet({"Q", "Q", "*"}), InvalidAutomaton);
  CHECK_THROWS_AS(Alphabet({"Q", "B"}), InvalidAutomaton);
  CHECK_THROWS_AS(Alphabet({"Q", "a b", "*"}), InvalidAutomaton);
  const Alphabet a({"Q", "B", "*"});
  CHECK(a.size() == 3);
  CHECK(a.name(a.outside()) == "*");
  CHECK(a.inner_states().size() == 2);
}

TEST_CASE("absent triples are distinguishable from any state") {
  StateTable t(3);
  const Triple x{state_at(0), state_at(1), state_at(2)};
  CHECK_FALSE(t.find(x).has_value());
  CHECK(t.insert(x, state_at(0)));
  CHECK_FALSE(t.insert(x, state_at(1)));
  REQUIRE(t.find(x).has_value());
  CHECK(*t.find(x) == state_at(0));
  CHECK(t.size() == 1);
  CHECK(t.erase(x));
  CHECK(t.empty());
}

TEST_CASE("counts of an empty table") {
  const auto ca = parse_ca("states: Q B\noutside: *\nboundary: B\nquiescent: Q\ngenerator: B\n");
  CHECK(count_states(ca) == 2);
  CHECK(count_transitions(ca) == 0);
}

TEST_CASE("entries with mid outside do not count as transitions") {
  const auto ca = parse_ca(
      "states: Q B\noutside: *\nboundary: B\nquiescent: Q\ngenerator: B\n"
      "* * B -> *\nQ Q Q -> Q\n* Q Q -> Q\n");
  CHECK(count_transitions(ca) == 2);
}

TEST_CASE("text format round trip is exact") {
  const auto seed = test::seed6();
  const std::string text = format_ca(seed);
  const auto again = parse_ca(text);
  CHECK(again == seed);
  CHECK(format_ca(again) == text);
}

TEST_CASE("parse errors carry the line number") {
  const std::string dup =
      "states: Q B\noutside: *\nboundary: B\nquiescent: Q\ngenerator: B\n"
      "Q Q Q -> Q\n# comment\nQ Q Q -> B\n";
  try {
    parse_ca(dup, "dup.ca");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 8);
    CHECK(std::string(e.what()).find("dup.ca:8") == 0);
  }
  CHECK_THROWS_AS(parse_ca("states: Q\noutside: *\nboundary: Q\nquiescent: Q\ngenerator: X\n"), ParseError);
  CHECK_THROWS_AS(parse_ca("states: Q\noutside: #\n"), ParseError);
  CHECK_THROWS_AS(parse_ca("states: Q\noutside: *\nboundary: Q\nquiescent: Q\n"), ParseError);
  CHECK_THROWS_AS(parse_ca("states: Q\noutside: *\nboundary: *\nquiescent: Q\ngenerator: Q\n"), ParseError);
  CHECK_THROWS_AS(parse_ca("states: Q\noutside: *\nboundary: Q\nquiescent: Q\ngenerator: Q\nQ Q -> Q\n"),
                  ParseError);
}

TEST_CASE("comments and blank lines are ignored") {
  const auto ca = parse_ca(
      "# header\n\nstates: Q   B # trailing\noutside: *\nboundary: B\nquiescent: Q\ngenerator: B\n"
      "  Q Q Q -> Q   # quiescence\n");
  CHECK(ca.table.size() == 1);
}

#include <algorithm>
#include <set>

#include "doctest.h"
#include "locasim/oracle.hpp"
#include "locasim/rtsg.hpp"

using namespace locasim;

namespace {

std::vector<bool> bits(std::size_t T, std::initializer_list<std::size_t> on) {
  std::vector<bool> v(T + 1, false);
  for (auto t : on) v[t] = true;
  return v;
}

bool matches(const std::vector<SequenceSpec>& v, const SequenceSpec& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

TEST_CASE("one state: a single candidate firing at every step") {
  const auto all = enumerate_candidates({1, 64, false});
  REQUIRE(all.size() == 1);
  const auto p = generated_prefix(all[0], 64);
  for (std::size_t t = 1; t <= 64; ++t) CHECK(p[t]);
  CHECK_FALSE(p[0]);
}

TEST_CASE("two-state enumeration size") {
  // 8 role assignments, 12 mid entries with 2 pinned: 8 * 2^10.
  CHECK(enumerate_candidates({2, 8, false}).size() == 8 * 1024);
  std::uint64_t n = 0;
  CHECK(enumerate_candidates({2, 8, false}, [&](const AutomatonSpec&) { return ++n < 10; }) == 10);
  CHECK_THROWS(enumerate_candidates({3, 8, false}));
}

TEST_CASE("every enumerated table is a total candidate") {
  for (const auto& ca : enumerate_candidates({2, 4, false})) {
    CHECK(check_candidate(ca).pass);
    CHECK(count_transitions(ca) == 12);
  }
}

TEST_CASE("classification of simple prefixes") {
  std::vector<bool> ones(65, true);
  ones[0] = false;
  CHECK(matches(classify_prefix(ones), SequenceSpec::linear(1, 0)));
  const auto m = bits(64, {1, 3, 7, 15, 31, 63});
  CHECK(matches(classify_prefix(m), SequenceSpec::of(SequenceKind::pow2_minus_1)));
  const auto c = bits(100, {1, 8, 27, 64});
  CHECK(matches(classify_prefix(c), SequenceSpec::of(SequenceKind::cube)));
  CHECK(classify_prefix(bits(20, {5})).empty());
}

TEST_CASE("prefix hex encoding") {
  CHECK(prefix_hex(bits(15, {0, 1, 9})) == "0302");
  CHECK(prefix_hex(bits(3, {})) == "00");
}

std::set<std::string> catalog_labels(const EnumerationSpace& space) {
  std::set<std::string> seen;
  for (const auto& e : build_catalog(space)) {
    for (const auto& s : e.matches) {
      seen.insert(s.name());
      CHECK(verify_solution(e.ca, s, space.horizon).pass);
    }
  }
  return seen;
}

TEST_CASE("two-state catalog") {
  const auto seen = catalog_labels({2, 64, false});
  for (const char* s : {"linear:2,0", "linear:3,-1", "linear:1,0", "linear:3,-2", "linear:2,-1",
                        "linear:1,1", "pow2-shift", "pow2-minus-1"}) {
    CHECK_MESSAGE(seen.count(s) == 1, std::string(s));
  }
  // 4n needs the leftmost cell to leave Q by itself, which (*,Q,Q)->Q forbids.
  CHECK(seen.count("linear:4,0") == 0);
  CHECK(catalog_labels({2, 64, false, false}).count("linear:4,0") == 1);
}

#include <algorithm>
#include <random>
#include <sstream>

#include <doctest.h>

#include "d2dsim/trace.hpp"

using namespace d2dsim;

namespace {

std::vector<EncounterRecord> parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse_trace(in);
}

}  // namespace

TEST_CASE("single record round trip") {
  const auto records = parse_string("node_a,node_b,start,end\nu1,u2,0,120\n");
  REQUIRE(records.size() == 1);
  CHECK(records[0].node_a == "u1");
  CHECK(records[0].node_b == "u2");
  CHECK(records[0].start == 0.0);
  CHECK(records[0].end == 120.0);
  CHECK(records[0].duration() == 120.0);
}

TEST_CASE("header only gives an empty list") {
  CHECK(parse_string("node_a,node_b,start,end\n").empty());
}

TEST_CASE("self-contact is rejected with the line number") {
  try {
    parse_string("node_a,node_b,start,end\nu1,u2,0,10\nu1,u1,0,10\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("malformed lines carry their line number") {
  CHECK_THROWS_AS(parse_string("node_a,node_b,start,end\nu1,u2,0\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_string("node_a,node_b,start,end\nu1,u2,x,10\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_string("node_a,node_b,start,end\nu1,u2,10,10\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_string("node_a,node_b,start,end\nu1,u2,-1,10\n"),
                  ParseError);
}

TEST_CASE("missing or wrong header is a format error") {
  CHECK_THROWS_AS(parse_string(""), FormatError);
  CHECK_THROWS_AS(parse_string("a,b,s,e\nu1,u2,0,1\n"), FormatError);
}

TEST_CASE("aggregation reproduces the worked moments") {
  const auto records = parse_string(
      "node_a,node_b,start,end\n"
      "u1,u2,0,2\n"
      "u2,u1,10,14\n");
  const auto stats = aggregate_contacts(records);
  REQUIRE(stats.size() == 1);
  const auto& st = stats.begin()->second;
  CHECK(st.n_encounters == 2);
  CHECK(st.mean_duration == doctest::Approx(3.0));
  CHECK(st.var_duration == doctest::Approx(1.0));
}

TEST_CASE("single sample has zero population variance") {
  const auto stats = aggregate_contacts(
      {{"a", "b", 0.0, 120.0}});
  const auto& st = stats.begin()->second;
  CHECK(st.n_encounters == 1);
  CHECK(st.mean_duration == 120.0);
  CHECK(st.var_duration == 0.0);
}

TEST_CASE("constant durations have zero variance") {
  const auto stats = aggregate_contacts({{"a", "b", 0.0, 5.0},
                                         {"a", "b", 10.0, 15.0},
                                         {"b", "a", 20.0, 25.0}});
  const auto& st = stats.begin()->second;
  CHECK(st.mean_duration == doctest::Approx(5.0));
  CHECK(st.var_duration == 0.0);
}

TEST_CASE("aggregation is permutation invariant") {
  std::vector<EncounterRecord> records;
  std::mt19937 shuffle_rng(42);
  std::uniform_real_distribution<double> dur(0.5, 100.0);
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"a", "b"}, {"a", "c"}, {"b", "c"}, {"c", "d"}};
  for (int i = 0; i < 200; ++i) {
    const auto& [x, y] = pairs[i % pairs.size()];
    const double start = i * 10.0;
    records.push_back({x, y, start, start + dur(shuffle_rng)});
  }
  const auto base = aggregate_contacts(records);
  for (int round = 0; round < 5; ++round) {
    std::shuffle(records.begin(), records.end(), shuffle_rng);
    const auto shuffled = aggregate_contacts(records);
    REQUIRE(shuffled.size() == base.size());
    for (const auto& [pair, st] : base) {
      const auto& other = shuffled.at(pair);
      CHECK(other.n_encounters == st.n_encounters);
      // Bit-identical, not merely approximately equal.
      CHECK(other.mean_duration == st.mean_duration);
      CHECK(other.var_duration == st.var_duration);
    }
  }
}

TEST_CASE("merged traces satisfy the weighted-moment identity") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> dur(0.1, 50.0);
  std::vector<EncounterRecord> first, second;
  for (int i = 0; i < 60; ++i)
    first.push_back({"a", "b", i * 100.0, i * 100.0 + dur(gen)});
  for (int i = 0; i < 40; ++i)
    second.push_back({"a", "b", i * 100.0, i * 100.0 + dur(gen)});

  auto merged = first;
  merged.insert(merged.end(), second.begin(), second.end());
  const auto whole = aggregate_contacts(merged).begin()->second;

  const auto s1 = aggregate_contacts(first).begin()->second;
  const auto s2 = aggregate_contacts(second).begin()->second;
  const double n1 = static_cast<double>(s1.n_encounters);
  const double n2 = static_cast<double>(s2.n_encounters);
  const double n = n1 + n2;
  const double mean = (n1 * s1.mean_duration + n2 * s2.mean_duration) / n;
  const double var =
      (n1 * (s1.var_duration + s1.mean_duration * s1.mean_duration) +
       n2 * (s2.var_duration + s2.mean_duration * s2.mean_duration)) /
          n -
      mean * mean;

  CHECK(whole.n_encounters == 100);
  CHECK(whole.mean_duration == doctest::Approx(mean).epsilon(1e-12));
  CHECK(whole.var_duration == doctest::Approx(var).epsilon(1e-9));
}

TEST_CASE("variance is zero iff all durations are equal") {
  const auto mixed = aggregate_contacts(
      {{"a", "b", 0.0, 5.0}, {"a", "b", 0.0, 6.0}});
  CHECK(mixed.begin()->second.var_duration > 0.0);
}

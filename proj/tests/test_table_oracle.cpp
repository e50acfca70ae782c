#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "tbyb/error.hpp"
#include "tbyb/table_oracle.hpp"

using namespace tbyb;

namespace {

CoalitionTable parse(const std::string& text, std::size_t n) {
  std::istringstream in(text);
  return load_table(in, n);
}

std::vector<double> random_raw(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> raw(std::size_t{1} << n, 0.0);
  for (std::size_t s = 1; s < raw.size(); ++s) raw[s] = gen() % 4 == 0 ? 0.0 : u(gen);
  return raw;
}

CoalitionTable from_raw(const std::vector<double>& raw, std::size_t n) {
  std::vector<std::pair<std::uint64_t, Accuracy>> entries;
  for (std::size_t s = 0; s < raw.size(); ++s)
    if (raw[s] != 0.0) entries.emplace_back(s, raw[s]);
  return CoalitionTable::from_entries(n, entries);
}

} // namespace

TEST_CASE("superset inherits its best subset") {
  const auto t = parse("coalition,accuracy\n0,0\n1,0.4\n2,0.3\n3,0.2\n", 2);
  CHECK(t.accuracy(Coalition::from_mask(3)) == 0.4);
  CHECK(t.raw()[3] == 0.2);
  CHECK(t.accuracy(Coalition{}) == 0.0);
}

TEST_CASE("a single grand-coalition row sets a_star") {
  const auto t = parse("coalition,accuracy\n65535,0.896294\n", 16);
  CHECK(t.max_accuracy() == 0.896294);
  CHECK(t.accuracy(Coalition::full(16)) == 0.896294);
  CHECK(t.accuracy(Coalition::from_mask(0x7FFF)) == 0.0);
}

TEST_CASE("three-player fixture against brute-force subset max") {
  const auto t = parse("coalition,accuracy\n1,0.5\n2,0.1\n4,0.3\n5,0.45\n6,0.2\n7,0.7\n", 3);
  std::vector<double> raw{0, 0.5, 0.1, 0, 0.3, 0.45, 0.2, 0.7};
  CHECK(t.accuracy(Coalition::from_mask(0b101)) == testing::brute_subset_max(raw, 0b101));
  CHECK(t.accuracy(Coalition::from_mask(0b101)) == 0.5);
  CHECK(t.accuracy(Coalition::full(3)) == t.max_accuracy());
}

TEST_CASE("random n=4 tables equal brute-force subset max") {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto raw = random_raw(gen, 4);
    const auto t = from_raw(raw, 4);
    for (std::uint64_t s = 0; s < 16; ++s) CHECK(t.accuracy(Coalition::from_mask(s)) == testing::brute_subset_max(raw, s));
  }
}

TEST_CASE("monotonized tables are monotone and idempotent") {
  std::mt19937_64 gen(10);
  for (std::size_t n : {1u, 5u, 10u}) {
    const auto raw = random_raw(gen, n);
    const auto t = from_raw(raw, n);
    const auto& mono = t.monotone();
    for (std::uint64_t s = 0; s < mono.size(); ++s)
      for (std::size_t i = 0; i < n; ++i) CHECK(mono[s] <= mono[s | (std::uint64_t{1} << i)]);
    CHECK(from_raw(mono, n).monotone() == mono);
    CHECK(t.max_accuracy() == *std::max_element(raw.begin(), raw.end()));
  }
}

TEST_CASE("load errors") {
  CHECK_THROWS_AS(parse("coalition,accuracy\n1,0.5\n1,0.6\n", 2), ConfigError);
  CHECK_THROWS_AS(parse("coalition,accuracy\n4,0.5\n", 2), ConfigError);
  CHECK_THROWS_AS(parse("coalition,accuracy\n1,1.5\n", 2), ConfigError);
  CHECK_THROWS_AS(parse("coalition,accuracy\n1,-0.1\n", 2), ConfigError);
  CHECK_THROWS_AS(parse("coalition,accuracy\n0,0.2\n", 2), ConfigError);
  CHECK_THROWS_AS(parse("coalition,accuracy\nx,0.2\n", 2), ConfigError);
  CHECK_THROWS_AS(parse("coalition,value\n1,0.2\n", 2), ConfigError);
  CHECK_THROWS_AS(parse("coalition,accuracy\n1,0.2,3\n", 2), ConfigError);
  CHECK_THROWS_AS(parse("coalition,accuracy\n1,0.2\n", 21), SizeLimitError);
  CHECK_THROWS_AS(load_table(std::string("/nonexistent/table.csv"), 2), IoError);
}

TEST_CASE("table csv round trip") {
  std::mt19937_64 gen(3);
  const auto raw = random_raw(gen, 3);
  const auto t = from_raw(raw, 3);
  std::stringstream s;
  write_table_csv(s, t);
  const auto back = load_table(s, 3);
  CHECK(back.raw() == t.raw());
  CHECK(back.monotone() == t.monotone());
}

TEST_CASE("bundled fixture loads with the expected best accuracy") {
  const auto t = load_table(std::string(TBYB_SOURCE_DIR "/data/fixture16/table.csv"), 16);
  CHECK(t.max_accuracy() == 0.896294);
  CHECK(t.accuracy(Coalition::full(16)) == 0.896294);
}

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "mmsev/rng.hpp"
#include "mmsev/util.hpp"
#include "test_support.hpp"

using namespace mmsev;

TEST_CASE("trim strips ascii whitespace from both ends") {
  CHECK(util::trim("  a b \t") == "a b");
  CHECK(util::trim("abc") == "abc");
  CHECK(util::trim("   ") == "");
  CHECK(util::trim("") == "");
  CHECK(util::trim("\r\n x \r\n") == "x");
}

TEST_CASE("to_lower maps ascii letters only") {
  CHECK(util::to_lower("AbC") == "abc");
  CHECK(util::to_lower("F0_MCEP") == "f0_mcep");
  CHECK(util::to_lower("123-_") == "123-_");
}

TEST_CASE("split keeps empty fields and does not merge delimiters") {
  CHECK(util::split("a,,b", ',') == std::vector<std::string>{"a", "", "b"});
  CHECK(util::split(",", ',') == std::vector<std::string>{"", ""});
  CHECK(util::split("", ',') == std::vector<std::string>{""});
  CHECK(util::split("a\tb", '\t') == std::vector<std::string>{"a", "b"});
  CHECK(util::split("x", ',') == std::vector<std::string>{"x"});
}

TEST_CASE("parse_double accepts full-string numerics only") {
  CHECK(util::parse_double("1.5") == 1.5);
  CHECK(util::parse_double("-2.25e1") == -22.5);
  CHECK(util::parse_double("42") == 42.0);
  CHECK_FALSE(util::parse_double("1,5").has_value());
  CHECK_FALSE(util::parse_double("1.5x").has_value());
  CHECK_FALSE(util::parse_double("").has_value());
  CHECK_FALSE(util::parse_double("nanx").has_value());
}

TEST_CASE("parse_int accepts full-string integers only") {
  CHECK(util::parse_int("24") == 24);
  CHECK(util::parse_int("-3") == -3);
  CHECK_FALSE(util::parse_int("3.5").has_value());
  CHECK_FALSE(util::parse_int("").has_value());
  CHECK_FALSE(util::parse_int("7a").has_value());
}

TEST_CASE("format_double round-trips exactly") {
  CHECK(util::format_double(0.5) == "0.5");
  CHECK(util::format_double(0.0) == "0");
  CHECK(util::format_double(-3.25) == "-3.25");

  SplitMix64 gen{2024};
  for (int i = 0; i < 2000; ++i) {
    const double v = gen.next_uniform(-1e6, 1e6);
    const auto back = util::parse_double(util::format_double(v));
    REQUIRE(back.has_value());
    CHECK(*back == v);
  }
}

TEST_CASE("fnv1a64 matches the published test vectors") {
  CHECK(util::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(util::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(util::fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("hex64 renders 16 lowercase hex digits") {
  CHECK(util::hex64(0) == "0000000000000000");
  CHECK(util::hex64(1) == "0000000000000001");
  CHECK(util::hex64(0xcbf29ce484222325ULL) == "cbf29ce484222325");
  CHECK(util::hex64(0xffffffffffffffffULL) == "ffffffffffffffff");
}

TEST_CASE("parallel_for covers every index exactly once") {
  const std::size_t n = 1000;
  for (int jobs : {1, 4, 16}) {
    std::vector<int> hits(n, 0);
    util::parallel_for(n, jobs, [&](std::size_t i) { hits[i] += 1; });
    for (std::size_t i = 0; i < n; ++i) CHECK(hits[i] == 1);
  }
}

TEST_CASE("parallel_for with zero items never calls the body") {
  std::atomic<int> calls{0};
  util::parallel_for(0, 4, [&](std::size_t) { calls.fetch_add(1); });
  CHECK(calls.load() == 0);
}

TEST_CASE("parallel_for rethrows a worker exception") {
  bool threw = false;
  try {
    util::parallel_for(64, 4, [](std::size_t i) {
      if (i == 33) throw std::runtime_error("boom");
    });
  } catch (const std::runtime_error& e) {
    threw = true;
    CHECK(std::string(e.what()) == "boom");
  }
  CHECK(threw);
}

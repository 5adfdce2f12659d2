#include "doctest.h"

#include <cmath>
#include <string>

#include "pbench/error.hpp"
#include "pbench/experiment/csv.hpp"
#include "pbench/experiment/number.hpp"
#include "pbench/experiment/shuffle.hpp"

using namespace pbench;

namespace {

std::string error_of(std::string_view text) {
  try {
    parse_trial_table(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

// Fields drawn from an alphabet heavy in characters that need quoting.
std::string random_field(Rng& rng) {
  static const std::vector<std::string> alphabet{"a", "Z", "0", ",", "\"", "\n", "\r\n", " ", "\xC3\xA9", "\xE2\x82\xAC",
                                                 "\xF0\x9F\x99\x82", "x", ";", "'"};
  std::string out;
  const auto len = rng.below(8);
  for (std::size_t i = 0; i < len; ++i) out += alphabet[rng.below(alphabet.size())];
  return out;
}

}  // namespace

TEST_SUITE("csv") {
  TEST_CASE("plain table parses") {
    const auto t = parse_trial_table("imageName,x\nbeach.png,1\nforest.png,2\n");
    CHECK(t.header() == std::vector<std::string>{"imageName", "x"});
    REQUIRE(t.size() == 2);
    CHECK(t.rows()[1][0] == "forest.png");
    CHECK(t.column("x") == 1);
    CHECK(t.column("y") == -1);
  }

  TEST_CASE("comma inside a quoted field round-trips") {
    const TrialTable t({"imageName", "n"}, {{"chart, annotated.png", "3"}});
    const auto text = write_csv(t);
    CHECK(text == "imageName,n\n\"chart, annotated.png\",3\n");
    CHECK(parse_trial_table(text) == t);
  }

  TEST_CASE("doubled quotes and embedded newlines") {
    const auto t = parse_trial_table("a,b\n\"say \"\"hi\"\"\",\"two\nlines\"\n");
    CHECK(t.rows()[0][0] == "say \"hi\"");
    CHECK(t.rows()[0][1] == "two\nlines");
    CHECK(write_csv(t) == "a,b\n\"say \"\"hi\"\"\",\"two\nlines\"\n");
  }

  TEST_CASE("CRLF input and missing final newline are accepted; LF is emitted") {
    const auto t = parse_trial_table("a,b\r\n1,2\r\n3,4");
    REQUIRE(t.size() == 2);
    CHECK(write_csv(t) == "a,b\n1,2\n3,4\n");
  }

  TEST_CASE("byte order mark is stripped") {
    const auto t = parse_trial_table("\xEF\xBB\xBFsession,x\ns1,1\n");
    CHECK(t.header()[0] == "session");
  }

  TEST_CASE("empty fields") {
    const auto t = parse_trial_table("a,b,c\n,,\n");
    CHECK(t.rows()[0] == std::vector<std::string>{"", "", ""});
    const TrialTable single({"only"}, {{""}, {"x"}});
    const auto text = write_csv(single);
    CHECK(text == "only\n\"\"\nx\n");
    CHECK(parse_trial_table(text) == single);
  }

  TEST_CASE("ragged rows are rejected with a data-row number") {
    CHECK(error_of("a,b\n1,2\n3\n").find("row 2") != std::string::npos);
    CHECK(error_of("a,b\n1,2,3\n").find("row 1") != std::string::npos);
  }

  TEST_CASE("malformed input is rejected") {
    CHECK_FALSE(error_of("").empty());
    CHECK_FALSE(error_of("a,a\n1,2\n").empty());
    CHECK_FALSE(error_of("a\n\"open\n").empty());
    CHECK_FALSE(error_of("a\nx\"y\n").empty());
    CHECK_FALSE(error_of("a\n\"q\"z\n").empty());
    CHECK_FALSE(error_of("a\rb\n").empty());
    CHECK_FALSE(error_of("a\n\xC3\x28\n").empty());
  }

  TEST_CASE("utf-8 validation") {
    CHECK(is_valid_utf8("plain"));
    CHECK(is_valid_utf8("caf\xC3\xA9 \xF0\x9F\x99\x82"));
    CHECK_FALSE(is_valid_utf8("\xC0\xAF"));          // overlong
    CHECK_FALSE(is_valid_utf8("\xED\xA0\x80"));      // surrogate
    CHECK_FALSE(is_valid_utf8("\xF4\x90\x80\x80"));  // > U+10FFFF
    CHECK_FALSE(is_valid_utf8("\xE2\x82"));          // truncated
  }

  TEST_CASE("property: write then parse is the identity") {
    Rng rng(20240611);
    for (int iter = 0; iter < 500; ++iter) {
      const auto cols = 1 + rng.below(5);
      std::vector<std::string> header;
      for (std::size_t c = 0; c < cols; ++c) header.push_back("c" + std::to_string(c) + random_field(rng));
      std::vector<std::vector<std::string>> rows(rng.below(6));
      for (auto& row : rows) {
        for (std::size_t c = 0; c < cols; ++c) row.push_back(random_field(rng));
      }
      const TrialTable t(header, rows);
      const auto text = write_csv(t);
      CAPTURE(text);
      const auto back = parse_trial_table(text);
      CHECK(back == t);
      CHECK(write_csv(back) == text);
    }
  }
}

TEST_SUITE("number") {
  TEST_CASE("shortest round-trip formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1e-9) == "1e-09");
    CHECK(format_number(std::int64_t{-42}) == "-42");
    CHECK(format_number(1.0 / 0.0) == "inf");
    CHECK(format_number(-1.0 / 0.0) == "-inf");
  }

  TEST_CASE("parsing") {
    CHECK(parse_double("2.5") == 2.5);
    CHECK(parse_double("-1e3") == -1000.0);
    CHECK_FALSE(parse_double("").has_value());
    CHECK_FALSE(parse_double("1.5x").has_value());
    CHECK_FALSE(parse_double(" 1").has_value());
    CHECK(parse_int("17") == 17);
    CHECK_FALSE(parse_int("1.0").has_value());
  }

  TEST_CASE("property: format then parse recovers the exact double") {
    Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
      const double v = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<double>(rng.below(40)) - 20);
      CHECK(parse_double(format_number(v)) == v);
    }
  }
}

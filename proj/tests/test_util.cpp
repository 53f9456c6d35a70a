#include <doctest.h>

#include "irbl/csv.hpp"
#include "irbl/errors.hpp"
#include "irbl/util.hpp"

using namespace irbl;

TEST_CASE("iso8601 parsing round trips") {
  CHECK(parse_iso8601("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_iso8601("2020-01-01T00:00:00Z") == 1577836800);
  CHECK(parse_iso8601("2020-01-01") == 1577836800);
  CHECK(parse_iso8601("2020-01-01T01:00:00+01:00") == 1577836800);
  CHECK(parse_iso8601("2019-12-31T23:00:00-01:00") == 1577836800);
  CHECK(parse_iso8601("2020-01-01T00:00:00.123Z") == 1577836800);
  CHECK(format_iso8601(1577836800) == "2020-01-01T00:00:00Z");
  CHECK(parse_iso8601(format_iso8601(1234567890)) == 1234567890);
}

TEST_CASE("iso8601 rejects malformed input") {
  for (const char* bad : {"", "2020", "2020-13-01", "2020-01-32", "2020-01-01T25:00:00Z",
                          "2020-01-01Tnope", "20200101"}) {
    CHECK_THROWS_AS(parse_iso8601(bad), Error);
  }
  try {
    parse_iso8601("2020-13-01");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MalformedTimestamp);
  }
}

TEST_CASE("path extension extraction") {
  CHECK(path_extension("src/A.java") == ".java");
  CHECK(path_extension("src/A.JAVA") == ".java");
  CHECK(path_extension("README") == "");
  CHECK(path_extension("dir.d/README") == "");
  CHECK(path_extension("a/b/c.tar.gz") == ".gz");
}

TEST_CASE("csv escaping and parsing invert each other") {
  const std::vector<std::string> fields = {"plain", "with,comma", "with\"quote", "multi\nline", ""};
  const auto parsed = parse_csv(csv_row(fields));
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0] == fields);
}

TEST_CASE("csv parser handles quoted fields and crlf") {
  const auto rows = parse_csv("a,\"b,c\",d\r\nx,\"y\"\"z\",w\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"a", "b,c", "d"});
  CHECK(rows[1] == std::vector<std::string>{"x", "y\"z", "w"});
  CHECK_THROWS_AS(parse_csv("a,\"unterminated\n"), Error);
}

TEST_CASE("fnv1a64 is stable") {
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") != fnv1a64("b"));
  CHECK(hex64(0x1234abcd) == "000000001234abcd");
}

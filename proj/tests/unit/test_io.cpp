#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <string>

#include "ise/error.hpp"
#include "ise/io.hpp"
#include "test_support.hpp"

using namespace ise;

namespace {

CsvTable parse(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

ErrorKind kind_of(const auto& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no ise::Error thrown");
  return ErrorKind::Validation;
}

}  // namespace

TEST_CASE("csv quoting, escaped quotes and line endings") {
  const CsvTable t = parse("a,\"b,c\",d\r\n1,\"say \"\"hi\"\"\",\"two\nlines\"\r\n3,,5\n");
  REQUIRE(t.header.size() == 3);
  CHECK(t.header[1] == "b,c");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][1] == "say \"hi\"");
  CHECK(t.rows[0][2] == "two\nlines");
  CHECK(t.rows[1][1].empty());
  CHECK(parse("x,y\n1,2").rows.size() == 1);
  CHECK(parse("x,y\n").rows.empty());
}

TEST_CASE("csv errors") {
  CHECK(kind_of([] { parse(""); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse("a,b\n1,2,3\n"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse("a,b\n1,\"2\n"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse("a,b\n1,2\"x\n"); }) == ErrorKind::Parse);
}

TEST_CASE("dataset_from_csv") {
  const CsvTable t = parse("x1,y,x2\n1.5,0,-2\n2.5,1,3e-1\n");
  const Dataset d = dataset_from_csv(t, "y", true);
  CHECK(d.p() == 3);
  CHECK(d.n() == 2);
  CHECK(d.feature_names == std::vector<std::string>{"(Intercept)", "x1", "x2"});
  CHECK(d.design(0, 0) == 1.0);
  CHECK(d.design(0, 1) == 1.0);
  CHECK(d.design(1, 1) == 2.5);
  CHECK(d.design(2, 1) == 0.3);
  CHECK(d.response(1) == 1.0);

  const Dataset bare = dataset_from_csv(t, "y", false);
  CHECK(bare.p() == 2);
  CHECK(bare.feature_names == std::vector<std::string>{"x1", "x2"});

  CHECK(kind_of([&] { dataset_from_csv(t, "z", true); }) == ErrorKind::Parse);
  CHECK(kind_of([] { dataset_from_csv(parse("y,y\n1,2\n"), "y", true); }) == ErrorKind::Parse);
  try {
    dataset_from_csv(parse("x,y\n1,abc\n"), "y", true);
    FAIL("expected Parse");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("'y'") != std::string::npos);
  }
}

TEST_CASE("source summary json") {
  const SourceSummary s = parse_source_summary(
      R"({"n1": 40, "beta1_hat": [1.0, -0.5], "gram": [[1.0, 0.2], [0.2, 2.0]], "sigma2_hat": 0.7})");
  CHECK(s.n1 == 40);
  CHECK(s.beta1_hat(1) == -0.5);
  CHECK(s.gram(0, 1) == 0.2);
  CHECK(s.gram(1, 1) == 2.0);

  CHECK(kind_of([] { parse_source_summary("{not json"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_source_summary(R"({"n1": 4, "beta1_hat": [1], "sigma2_hat": 1})"); }) ==
        ErrorKind::Parse);
  CHECK(kind_of([] {
          parse_source_summary(R"({"n1": 4, "beta1_hat": [1, 2], "gram": [[1]], "sigma2_hat": 1})");
        }) == ErrorKind::DimensionMismatch);
  CHECK(kind_of([] {
          parse_source_summary(R"({"n1": 0, "beta1_hat": [1], "gram": [[1]], "sigma2_hat": 1})");
        }) == ErrorKind::Validation);
}

TEST_CASE("format_double round-trips") {
  auto rng = CounterRng::stream(test::kSeed, 500);
  for (int i = 0; i < 2000; ++i) {
    const double v = rng.normal() * std::pow(10.0, static_cast<int>(rng.uniform() * 40) - 20);
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "NaN");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-Inf");
}

TEST_CASE("csv_field quotes only when needed and round-trips") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"x\"") == "\"say \"\"x\"\"\"");
  const std::string nasty = "q\"u,o\nte";
  const CsvTable t = parse("h\n" + csv_field(nasty) + "\n");
  CHECK(t.rows[0][0] == nasty);
}

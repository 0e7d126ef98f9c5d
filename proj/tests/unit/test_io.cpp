#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "../support/oracles.hpp"
#include "mdcrt/io.hpp"

using namespace mdcrt;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("matrix decoding") {
  IntMat m = matrix_from_json(parse_json_text(R"([["48","17"],["8","46"]])", "t"), "M");
  CHECK(m == IntMat{{48, 17}, {8, 46}});
  CHECK(matrix_from_json(parse_json_text(R"([["1"]])", "t"), "M") == IntMat{{1}});
  IntMat big = matrix_from_json(parse_json_text(R"([["123456789012345678901234567890"]])", "t"), "M");
  CHECK(big(0, 0) == Int("123456789012345678901234567890"));
  CHECK(vector_from_json(parse_json_text(R"(["-3", 4])", "t"), "v") == IntVec{-3, 4});
  RatVec q = rat_vector_from_json(parse_json_text(R"(["1/2","-3"])", "t"), "w");
  CHECK(q[0] == Rat(1, 2));
  CHECK(q[1] == Rat(-3));
}

TEST_CASE("decoding errors carry context") {
  CHECK(code_of([] { matrix_from_json(parse_json_text(R"([["1","2"],["3"]])", "t"), "M"); }) ==
        ErrorCode::ParseError);
  CHECK(code_of([] { matrix_from_json(parse_json_text(R"([["1.5"]])", "t"), "M"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { matrix_from_json(parse_json_text(R"([[1.5]])", "t"), "M"); }) == ErrorCode::ParseError);
  try {
    parse_json_text("[[\"1\",\n \"2\"", "fixture");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  try {
    matrix_from_json(parse_json_text(R"([["1","2"],["3"]])", "t"), "M");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("ragged") != std::string::npos);
  }
  CHECK(code_of([] { read_json_file("/nonexistent/path.json"); }) == ErrorCode::IoError);
}

TEST_CASE("printed matrices re-parse to equal matrices") {
  oracle::Gen g(81);
  for (int t = 0; t < 100; ++t) {
    IntMat m = g.matrix(g.range(1, 4), g.range(1, 4), -1000000, 1000000);
    m(0, 0) *= Int("1000000000000000000000");
    Json j = to_json(m);
    CHECK(matrix_from_json(parse_json_text(j.dump(), "t"), "m") == m);
  }
}

TEST_CASE("csv emission") {
  std::ostringstream os;
  emit_csv(os, "seed=1,version=x", {"case", "tau"}, {{"base", "0"}, {"a,b", "q\"x"}});
  CHECK(os.str() == "# meta: seed=1,version=x\ncase,tau\nbase,0\n\"a,b\",\"q\"\"x\"\n");
  std::ostringstream empty;
  emit_csv(empty, "m", {"case", "snr_db"}, {});
  CHECK(empty.str() == "# meta: m\ncase,snr_db\n");
  CHECK(format_double(0.5) == "0.5");
  CHECK_THROWS_AS(emit_csv(os, "m", {"a"}, {{"1", "2"}}), Error);
  CHECK(code_of([] { emit_csv(std::string("/nonexistent/dir/x.csv"), "m", {"a"}, {}); }) == ErrorCode::IoError);
}

TEST_CASE("error code names") {
  CHECK(std::string(error_code_name(ErrorCode::CrtInconsistent)) == "CRT_INCONSISTENT");
  CHECK(std::string(error_code_name(ErrorCode::ConditionViolated)) == "CONDITION_VIOLATED");
}

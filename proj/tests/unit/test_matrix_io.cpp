#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "posop/errors.hpp"
#include "posop/matrix_io.hpp"

using namespace posop;
using nlohmann::json;

TEST_CASE("plain text rows become a Sequence(2) operator") {
  const auto t = parse_operator("# identity\n1 0\n0 1\n\n", "id");
  CHECK(t.dim() == 2);
  CHECK(t.matrix() == Matrix::Identity(2, 2));
  CHECK(t.space().kind() == SpaceKind::Sequence);
  CHECK(t.space().p() == 2.0);
  CHECK(t.label() == "id");
}

TEST_CASE("plain text errors") {
  CHECK_THROWS_AS(parse_operator(""), ParseError);
  CHECK_THROWS_AS(parse_operator("   \n# only a comment\n"), ParseError);
  CHECK_THROWS_AS(parse_operator("1 x\n0 1\n"), ParseError);
  CHECK_THROWS_AS(parse_operator("1 0\n0\n"), ParseError);
  CHECK_THROWS_AS(parse_operator("1 0 0\n0 1 0\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_operator("1 -0.5\n0 1\n"), NegativeEntry);
}

TEST_CASE("JSON documents with each space kind") {
  const auto lp = parse_operator(
      R"({"dim": 2, "space": {"kind": "lp", "p": 1, "a": 0, "b": 2}, "rows": [[1,0],[0,1]]})");
  CHECK(lp.space().kind() == SpaceKind::LpGrid);
  CHECK(lp.space().p() == 1.0);
  CHECK(lp.space().weights()[0] == doctest::Approx(1.0));

  const auto ck = parse_operator(
      R"({"space": {"kind": "ck", "a": -1, "b": 1}, "rows": [[1,0,0],[0,1,0],[0,0,1]]})");
  CHECK(ck.space().kind() == SpaceKind::CKGrid);
  CHECK(ck.space().coordinates() == std::vector<double>{-1.0, 0.0, 1.0});

  const auto seq = parse_operator(
      R"({"space": {"kind": "seq", "p": "inf"}, "rows": [[0,1],[1,0]], "label": "swap"})");
  CHECK(std::isinf(seq.space().p()));
  CHECK(seq.label() == "swap");

  const auto defaulted = parse_operator(R"({"rows": [[0.5]]})", "fallback");
  CHECK(defaulted.space().kind() == SpaceKind::Sequence);
  CHECK(defaulted.label() == "fallback");
}

TEST_CASE("JSON errors") {
  CHECK_THROWS_AS(parse_operator("{"), ParseError);
  CHECK_THROWS_AS(parse_operator(R"({"dim": 2})"), ParseError);
  CHECK_THROWS_AS(parse_operator(R"({"rows": []})"), ParseError);
  CHECK_THROWS_AS(parse_operator(R"({"dim": 3, "rows": [[1,0],[0,1]]})"), DimensionMismatch);
  CHECK_THROWS_AS(parse_operator(R"({"dim": "two", "rows": [[1]]})"), ParseError);
  CHECK_THROWS_AS(parse_operator(R"({"rows": [[1, 0]]})"), InvalidArgument);
  CHECK_THROWS_AS(parse_operator(R"({"rows": [["a"]]})"), ParseError);
  CHECK_THROWS_AS(parse_operator(R"({"space": {"kind": "banach"}, "rows": [[1]]})"), ParseError);
  CHECK_THROWS_AS(parse_operator(R"({"space": {"kind": "seq", "p": "two"}, "rows": [[1]]})"),
                  ParseError);
  CHECK_THROWS_AS(
      parse_operator(R"({"space": {"kind": "lp", "weights": [1]}, "rows": [[1,0],[0,1]]})"),
      DimensionMismatch);
  CHECK_THROWS_AS(parse_operator(R"({"rows": [[1, -1], [0, 1]]})"), NegativeEntry);
}

TEST_CASE("operator JSON round-trips") {
  Matrix m(3, 3);
  m << 0.1, 0.2, 0.7, 0, 1, 0, 0.25, 0.25, 0.5;
  RealVector w(3);
  w << 0.5, 0.25, 0.25;
  for (const auto& space : {SpaceSemantics::lp_grid(w, 3.0, {0.1, 0.5, 0.9}),
                            SpaceSemantics::ck_uniform(3, -1, 1),
                            SpaceSemantics::sequence(3, INFINITY)}) {
    const Operator t(m, space, "sample");
    const json doc = operator_to_json(t);
    const auto back = operator_from_json(json::parse(doc.dump()));
    CHECK(back.matrix() == t.matrix());
    CHECK(back.space() == t.space());
    CHECK(back.label() == "sample");
  }
}

TEST_CASE("load_operator reads files and labels them by file name") {
  const std::string path = "posop_io_test_matrix.txt";
  {
    std::ofstream out(path);
    out << "0 1\n1 0\n";
  }
  const auto t = load_operator(path);
  CHECK(t.label() == "posop_io_test_matrix.txt");
  CHECK(t.matrix()(0, 1) == 1.0);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_operator("does/not/exist.json"), ParseError);
}

TEST_CASE("exponent serialization") {
  CHECK(exponent_to_json(INFINITY) == "inf");
  CHECK(exponent_to_json(2.5) == 2.5);
}

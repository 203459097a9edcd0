#include <random>

#include "deligne_kit/session.hpp"
#include "doctest.h"

using namespace dk;

namespace {

template <class E>
std::pair<std::size_t, std::size_t> error_at(const std::string& text) {
  try {
    parse_session(text);
  } catch (const E& e) {
    return {e.line(), e.column()};
  }
  return {0, 0};
}

}  // namespace

TEST_CASE("minimal session with the ring as module") {
  auto s = parse_session("ring Q[x]; ideal J=(x); task deligne-roundtrip J R samples 5 seed 1;");
  REQUIRE(s.tasks().size() == 1);
  const auto& t = std::get<RoundtripTask>(s.tasks()[0]);
  CHECK(t.ideal == "J");
  CHECK(t.module == "R");
  CHECK(t.samples == 5);
  CHECK(t.seed == 1);
  CHECK(s.module("R").rank() == 1);
  CHECK(task_kind(s.tasks()[0]) == "deligne-roundtrip");
}

TEST_CASE("full grammar") {
  const char* text = R"(
# a comment
ring F7[x, y, z] / (x*z) order lex;
module M = coker [[x, 0], [0, y^2]];   # rank 2, two relations
module F = free 3;
ideal J = (x, y);
sequence s = (x, y + z);
task prozero s on M degree 1 from 2 cap 9 allow-exhausted;
task deligne-roundtrip J M samples 4 seed 11 probes 2 stage 3;
task sheaf-glue J F samples 3 seed 0;
task diagram J R samples 2 seed 5;
task idealization poles (1, 3) cap 6;
)";
  auto s = parse_session(text);
  CHECK(s.ring().ring->field() == Field::prime(7));
  CHECK(s.ring().ring->order() == MonomialOrder::Lex);
  CHECK(s.ring().defining.size() == 1);
  REQUIRE(s.modules().size() == 2);
  CHECK(s.modules()[0].rank == 2);
  CHECK(s.modules()[0].relation_columns().size() == 2);
  CHECK(s.modules()[1].free);
  CHECK(s.ideal("s").sequence);
  REQUIRE(s.tasks().size() == 5);
  auto pz = std::get<ProZeroTask>(s.tasks()[0]);
  CHECK(pz.module == "M");
  CHECK(pz.from == 2);
  CHECK(pz.cap == 9);
  CHECK(pz.allow_exhausted);
  auto rt = std::get<RoundtripTask>(s.tasks()[1]);
  CHECK(rt.stage == 3);
  CHECK(rt.probes == 2);
  CHECK(std::get<IdealizationTask>(s.tasks()[4]).poles == std::vector<int>{1, 3});

  // y^2 e_2 is a relation of M.
  auto M = s.module("M");
  auto y2 = parse_poly(s.ring().ring, "y^2");
  CHECK(is_zero(M.normal_form({Poly(s.ring().ring), y2})));
}

TEST_CASE("print then parse is a fixpoint") {
  std::vector<std::string> texts = {
      "ring Q[x]; ideal J=(x); task deligne-roundtrip J R samples 5 seed 1;",
      "ring Q[x,y]; sequence s=(x,x); task prozero s degree 1 from 2 cap 10;",
      "ring F5[x,y,z]/(x*z, y^2 - 2*x); module M = coker [[x, y, 1/2*z]]; ideal J = (x, z);"
      "task sheaf-glue J M samples 3 seed 9; task diagram J M samples 1 seed 2;",
      "ring Q[a,b] / (a*b) order lex; module N = free 2; task idealization poles (2) cap 4;",
  };
  for (const auto& t : texts) {
    auto s = parse_session(t);
    auto printed = s.print();
    auto again = parse_session(printed);
    CHECK(again == s);
    CHECK(again.print() == printed);
  }
}

TEST_CASE("missing semicolon is reported where the next token starts") {
  auto [line, col] = error_at<ParseError>("ring Q[x];\nmodule M = coker [[x]]\nideal J = (x);");
  CHECK(line == 3);
  CHECK(col == 1);
  auto [l2, c2] = error_at<ParseError>("ring Q[x];\nmodule M = coker [[x]]");
  CHECK(l2 == 2);
  CHECK(c2 == 23);
}

TEST_CASE("structural errors") {
  CHECK(error_at<ParseError>("ideal J = (x);").first == 1);            // ring must come first
  CHECK(error_at<ParseError>("ring Q[x]; ring Q[y];").second == 12);
  CHECK(error_at<ParseError>("ring F6[x];").second == 6);
  CHECK(error_at<ParseError>("ring G[x];").second == 6);
  CHECK(error_at<ParseError>("ring Q[x]; ideal J = (x + );").first == 1);
  CHECK(error_at<ParseError>("ring Q[x]; frobnicate;").second == 12);
  CHECK(error_at<ParseError>("ring Q[x]; ideal J = (x); task nope J;").second == 32);

  CHECK(error_at<NameError>("ring Q[x,x];").second == 10);
  CHECK(error_at<NameError>("ring Q[x]; ideal J=(x); ideal J=(x^2);").second == 31);
  CHECK(error_at<NameError>("ring Q[x]; ideal R=(x);").second == 18);
  CHECK(error_at<NameError>("ring Q[x]; task diagram K R samples 1 seed 1;").second == 25);
  CHECK(error_at<NameError>("ring Q[x]; ideal J=(x); task diagram J M samples 1 seed 1;").second == 40);

  CHECK(error_at<DimensionError>("ring Q[x]; module M = coker [[x, 1], [x]];").second == 38);
  CHECK(error_at<DimensionError>("ring Q[x]; sequence s=(x); task prozero s degree 2 from 1 cap 3;").second ==
        50);
  CHECK(error_at<DimensionError>("ring Q[x]; sequence s=(x); task prozero s degree 1 from 4 cap 3;").second ==
        63);
  CHECK(error_at<DimensionError>("ring Q[x]; task idealization poles (1, 0) cap 3;").second == 40);
  CHECK(error_at<DimensionError>("ring Q[x]; module M = free 0;").second == 28);
}

TEST_CASE("random sessions survive print and parse") {
  std::mt19937_64 rng(3);
  const std::vector<std::string> polys = {"x", "y", "x*y", "x^2 - 3*y", "2/3*x + 1", "0", "y^3"};
  for (int trial = 0; trial < 40; ++trial) {
    std::string t = "ring Q[x,y];";
    const int r = 1 + static_cast<int>(rng() % 3), c = 1 + static_cast<int>(rng() % 3);
    t += "module M = coker [";
    for (int i = 0; i < r; ++i) {
      t += i ? ",[" : "[";
      for (int j = 0; j < c; ++j) t += (j ? "," : "") + polys[rng() % polys.size()];
      t += "]";
    }
    t += "];ideal J = (" + polys[rng() % 3] + ", " + polys[rng() % polys.size()] + ");";
    t += "task sheaf-glue J M samples " + std::to_string(1 + rng() % 9) + " seed " + std::to_string(rng() % 1000) +
         ";";
    t += "task prozero J degree " + std::to_string(rng() % 3) + " from 1 cap " + std::to_string(1 + rng() % 9) + ";";
    auto s = parse_session(t);
    CHECK(parse_session(s.print()) == s);
  }
}

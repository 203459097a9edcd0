#include <random>

#include "deligne_kit/groebner.hpp"
#include "doctest.h"
#include "oracle/linalg.hpp"

using namespace dk;

namespace {

struct Qxy {
  RingPtr R = PolyRing::make(Field::rationals(), {"x", "y"});
  Poly x = Poly::variable(R, 0), y = Poly::variable(R, 1), one = Poly::constant(R, 1), zero = Poly(R);
  Poly p(const char* s) const { return parse_poly(R, s); }
};

FreeSubmodule ideal(const RingPtr& R, std::vector<Poly> gens) {
  std::vector<Vector> v;
  for (auto& g : gens) v.push_back({g});
  return FreeSubmodule(R, 1, v);
}

// dim_k of the degree-d part of the syzygy module of homogeneous gens,
// by brute-force linear algebra.
std::size_t brute_syzygy_dim(const RingPtr& R, const std::vector<Poly>& gens, int d) {
  oracle::MonomialIndex target{oracle::monomials_of_degree(R->nvars(), d)};
  std::vector<oracle::Row> columns;
  for (const auto& g : gens)
    for (const auto& m : oracle::monomials_of_degree(R->nvars(), d - static_cast<int>(g.total_degree())))
      columns.push_back(oracle::coordinates(g.mul_term(m, 1), target));
  if (columns.empty()) return 0;
  auto mat = oracle::transpose(columns, target.mons.size());
  return columns.size() - oracle::rank(R->field(), mat);
}

// dim_k of the degree-d part of the module spanned by syzygy vectors.
std::size_t span_dim(const RingPtr& R, const std::vector<Poly>& gens, const std::vector<Vector>& syz, int d) {
  std::vector<oracle::MonomialIndex> blocks;
  std::size_t width = 0;
  for (const auto& g : gens) {
    blocks.push_back({oracle::monomials_of_degree(R->nvars(), d - static_cast<int>(g.total_degree()))});
    width += blocks.back().mons.size();
  }
  std::vector<oracle::Row> rows;
  for (const auto& s : syz) {
    int sdeg = -1;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (!s[i].is_zero()) sdeg = static_cast<int>(s[i].total_degree() + gens[i].total_degree());
    for (const auto& m : oracle::monomials_of_degree(R->nvars(), d - sdeg)) {
      oracle::Row row;
      for (std::size_t i = 0; i < s.size(); ++i) {
        auto part = oracle::coordinates(s[i].mul_term(m, 1), blocks[i]);
        row.insert(row.end(), part.begin(), part.end());
      }
      rows.push_back(row);
    }
  }
  if (rows.empty() || width == 0) return 0;
  return oracle::rank(R->field(), rows);
}

}  // namespace

TEST_CASE("buchberger examples") {
  Qxy q;
  auto B = buchberger(ideal(q.R, {q.x, q.y}));
  REQUIRE(B.size() == 2);
  CHECK(B.generators()[0][0] == q.x);
  CHECK(B.generators()[1][0] == q.y);

  auto I = ideal(q.R, {q.p("x^2 - y"), q.p("x*y - 1")});
  // (1,1) is a common zero, so 1 is not in I; y^2 - x = x(xy-1) - y(x^2-y).
  CHECK_FALSE(I.contains(Vector{q.one}));
  CHECK(I.contains(Vector{q.p("y^2 - x")}));
  CHECK(q.p("x*(x*y - 1) - y*(x^2 - y)") == q.p("y^2 - x"));
  for (const auto& g : I.basis()) CHECK(g[0].lead_coeff() == 1);

  auto E = buchberger(FreeSubmodule(q.R, 1, {}));
  CHECK(E.size() == 0);
  CHECK_FALSE(E.contains(Vector{q.x}));
}

TEST_CASE("prime field bases keep canonical coefficients") {
  auto R = PolyRing::make(Field::prime(7), {"x", "y", "z"});
  auto p = [&](const char* s) { return parse_poly(R, s); };
  QuotientRing Q(R, {p("x*z")});
  auto M = Q.coker(2, {{p("x"), Poly(R)}, {Poly(R), p("y^2")}, {p("y + 3*z"), p("5*x")}});
  for (const auto& g : M.relations().basis())
    for (const auto& c : g)
      for (const auto& t : c.terms()) {
        CHECK(t.coeff >= 0);
        CHECK(t.coeff < 7);
        CHECK(t.coeff.get_den() == 1);
      }
  CHECK(is_zero(M.normal_form({Poly(R), p("y^2")})));
  CHECK(is_zero(M.normal_form({p("x*y + 3*x*z"), p("5*x^2")})));
  CHECK_FALSE(is_zero(M.normal_form({p("y"), Poly(R)})));
  auto I = ideal(R, {p("x^2 - y"), p("x*y - 1")});
  CHECK(I.contains(Vector{p("y^2 - x")}));
  CHECK(I.contains(Vector{p("6*y^2 + x")}));
}

TEST_CASE("normal_form_lift examples and soundness") {
  Qxy q;
  auto I = ideal(q.R, {q.x, q.y});
  auto l = normal_form_lift(Vector{q.p("x^2*y")}, I);
  CHECK(l.member());
  CHECK(l.coefficients[0] * q.x + l.coefficients[1] * q.y == q.p("x^2*y"));

  auto l1 = normal_form_lift(Vector{q.one}, I);
  CHECK_FALSE(l1.member());
  CHECK(l1.remainder[0] == q.one);

  auto l0 = normal_form_lift(Vector{q.y * q.x - q.x * q.y}, I);
  CHECK(l0.member());

  std::mt19937 rng(3);
  std::uniform_int_distribution<int> c(-3, 3);
  auto J = ideal(q.R, {q.p("x^2 - y"), q.p("x*y - 1"), q.p("y^3 + x")});
  for (int it = 0; it < 25; ++it) {
    Poly a = q.p("x").scale(c(rng)) + q.p("y^2").scale(c(rng)) + q.one.scale(c(rng));
    Poly b = q.p("x*y").scale(c(rng)) + q.p("y").scale(c(rng));
    Poly v = a * J.generators()[0][0] + b * J.generators()[2][0];
    auto lift = J.lift(Vector{v});
    REQUIRE(lift.member());
    Poly recon(q.R);
    for (std::size_t j = 0; j < J.size(); ++j) recon += lift.coefficients[j] * J.generators()[j][0];
    CHECK(recon == v);
    auto lift2 = J.lift(Vector{v + q.p("x^5")});
    Poly recon2 = lift2.remainder[0];
    for (std::size_t j = 0; j < J.size(); ++j) recon2 += lift2.coefficients[j] * J.generators()[j][0];
    CHECK(recon2 == v + q.p("x^5"));
  }
}

TEST_CASE("module normal forms are canonical") {
  Qxy q;
  FreeSubmodule S(q.R, 2, {{q.x, q.y}, {q.y, q.zero}});
  Vector a{q.p("x^2 + y"), q.p("x*y")};
  Vector b = add(a, scale(q.p("x + 3"), S.generators()[0]));
  b = add(b, scale(q.p("y^2"), S.generators()[1]));
  CHECK(S.normal_form(a) == S.normal_form(b));
}

TEST_CASE("syzygy examples") {
  Qxy q;
  auto S1 = syzygies(ideal(q.R, {q.x, q.y}));
  REQUIRE(S1.size() == 1);
  const auto& s = S1.generators()[0];
  CHECK((s[0] * q.x + s[1] * q.y).is_zero());
  CHECK(S1.contains(Vector{q.y, -q.x}));
  CHECK(FreeSubmodule(q.R, 2, {{q.y, -q.x}}).contains(S1));

  CHECK(syzygies(ideal(q.R, {q.x})).size() == 0);

  auto S3 = syzygies(ideal(q.R, {q.p("x^2"), q.p("x*y")}));
  CHECK(S3.contains(Vector{q.y, -q.x}));
  CHECK(FreeSubmodule(q.R, 2, {{q.y, -q.x}}).contains(S3));
}

TEST_CASE("syzygies agree with a degreewise brute-force kernel") {
  Qxy q;
  auto R3 = PolyRing::make(Field::rationals(), {"x", "y", "z"});
  std::vector<std::pair<RingPtr, std::vector<Poly>>> cases = {
      {q.R, {q.p("x^2"), q.p("x*y")}},
      {q.R, {q.p("x^2"), q.p("y^2"), q.p("x*y")}},
      {q.R, {q.x, q.x}},
      {q.R, {q.p("x^2 - y^2"), q.p("x*y")}},
      {R3, {parse_poly(R3, "x*y"), parse_poly(R3, "y*z"), parse_poly(R3, "x*z")}},
      {R3, {parse_poly(R3, "x"), parse_poly(R3, "y"), parse_poly(R3, "z")}},
  };
  for (const auto& [R, gens] : cases) {
    auto syz = ideal(R, gens).syzygy_generators();
    for (const auto& s : syz) {
      Poly sum(R);
      for (std::size_t i = 0; i < gens.size(); ++i) sum += s[i] * gens[i];
      CHECK(sum.is_zero());
    }
    for (int d = 0; d <= 4; ++d) CHECK(span_dim(R, gens, syz, d) == brute_syzygy_dim(R, gens, d));
  }
}

TEST_CASE("module_kernel examples") {
  auto R1 = PolyRing::make(Field::rationals(), {"x"});
  Poly x = Poly::variable(R1, 0);
  auto F = FpModule::free(R1, 1);
  CHECK(module_kernel(ModuleHom(F, F, {{x}})).inclusion.empty());

  auto M = FpModule::coker(R1, 1, {{x * x}});
  auto K = module_kernel(ModuleHom(M, M, {{x}}));
  REQUIRE(K.inclusion.size() == 1);
  CHECK(M.element(K.inclusion[0]) == M.element({x}));
  // (x)/(x^2) is one-dimensional: x kills its generator
  CHECK(K.kernel.relations().contains(Vector{x}));
  CHECK_FALSE(K.kernel.relations().contains(Vector{Poly::constant(R1, 1)}));

  Qxy q;
  auto F2 = FpModule::free(q.R, 2);
  auto Kp = module_kernel(ModuleHom(F2, FpModule::free(q.R, 1), {{q.one}, {q.zero}}));
  REQUIRE(Kp.inclusion.size() == 1);
  CHECK(F2.element(Kp.inclusion[0]) == F2.element({q.zero, q.one}));
  CHECK(Kp.kernel.relations().size() == 0);

  CHECK_THROWS_AS(ModuleHom(M, F, {{Poly::constant(R1, 1)}}), StructuralError);
}

TEST_CASE("hom_module examples") {
  auto R1 = PolyRing::make(Field::rationals(), {"x"});
  Poly x = Poly::variable(R1, 0), one = Poly::constant(R1, 1);
  auto Rx = FpModule::coker(R1, 1, {{x}});

  HomModule H1(Rx, Rx);
  // generated by the identity, and x kills it
  REQUIRE(H1.module().rank() >= 1);
  bool has_identity = false;
  for (std::size_t k = 0; k < H1.module().rank(); ++k)
    if (Rx.element(H1.generator_values()[k][0]) == Rx.element({one})) has_identity = true;
  CHECK(has_identity);
  for (std::size_t k = 0; k < H1.module().rank(); ++k)
    CHECK(H1.module().relations().contains(scale(x, unit_vector(R1, H1.module().rank(), k))));

  // Hom((x), R): (x) presented as a free module of rank 1 on the generator x
  QuotientRing Q(R1);
  auto Jx = Q.ideal_module({x});
  HomModule H2(Jx, Q.as_module());
  REQUIRE(H2.module().rank() == 1);
  CHECK(H2.module().relations().size() == 0);
  auto val = H2.generator_values()[0][0][0];
  CHECK(val.is_constant());
  CHECK_FALSE(val.is_zero());

  HomModule H3(Rx, Q.as_module());
  CHECK(H3.module().is_zero_module());

  // evaluator is additive and kills relations
  Qxy q;
  QuotientRing Qr(q.R);
  auto J2 = Qr.ideal_module(ideal_power({q.x, q.y}, 2));
  auto M = Qr.coker(1, {{q.p("x^2")}, {q.p("x*y")}});
  HomModule H4(J2, M);
  Vector h = zero_vector(q.R, H4.module().rank());
  for (std::size_t k = 0; k < h.size(); ++k) h[k] = q.p("x + 2*y + 1").scale(Coeff(static_cast<long>(k) + 1));
  Vector a{q.x, q.y, q.one}, b{q.y, q.zero, q.p("x^2")};
  CHECK(H4.evaluate(h, add(a, b)) == H4.evaluate(h, a) + H4.evaluate(h, b));
  for (const auto& rel : J2.relations().generators()) CHECK(H4.evaluate(h, rel).is_zero());
}

TEST_CASE("saturate examples") {
  auto R1 = PolyRing::make(Field::rationals(), {"x"});
  Poly x = Poly::variable(R1, 0), one = Poly::constant(R1, 1);
  auto M = FpModule::coker(R1, 1, {{x * x}});
  auto S = saturate(M, {x});
  CHECK(S.stabilization_index() == 2);
  CHECK(S.contains({one}));

  Qxy q;
  auto S2 = saturate(FpModule::free(q.R, 1), {q.x, q.y});
  CHECK(S2.stabilization_index() == 1);
  CHECK(S2.generators().empty());

  // Q[x,y]/(x^2 y), J = (x): chain (xy) ⊂ (y) = (y)
  auto M3 = FpModule::coker(q.R, 1, {{q.p("x^2*y")}});
  auto S3 = saturate(M3, {q.x});
  CHECK(S3.stabilization_index() == 2);
  CHECK(S3.contains({q.y}));
  CHECK_FALSE(S3.contains({q.x}));
  CHECK(S3.kill_exponent({q.y}) == 2);
  CHECK(S3.kill_exponent({q.p("x*y")}) == 1);
  CHECK_FALSE(S3.kill_exponent({q.one}).has_value());
  // brute-force colon chain oracle: y*x^t is zero iff t >= 2
  CHECK_FALSE(M3.element({q.p("x*y")}).is_zero());
  CHECK(M3.element({q.p("x^2*y")}).is_zero());
  // chain is monotone
  for (std::size_t t = 1; t < S3.chain().size(); ++t) CHECK(S3.chain()[t].contains(S3.chain()[t - 1]));
}

TEST_CASE("ideal_power examples and multiplicativity") {
  Qxy q;
  auto P = ideal_power({q.x, q.y}, 2);
  REQUIRE(P.size() == 3);
  CHECK(P[0] == q.p("x^2"));
  CHECK(P[1] == q.p("x*y"));
  CHECK(P[2] == q.p("y^2"));
  CHECK(ideal_power({q.x}, 3) == std::vector<Poly>{q.p("x^3")});
  auto R3 = PolyRing::make(Field::rationals(), {"x", "y", "z"});
  CHECK(ideal_power({Poly::variable(R3, 0), Poly::variable(R3, 1), Poly::variable(R3, 2)}, 2).size() == 6);
  CHECK(ideal_power({q.x, q.x}, 2).size() == 1);
  CHECK(ideal_power({q.x}, 0)[0] == q.one);

  std::vector<Poly> J{q.p("x + y"), q.p("y^2")};
  for (std::uint32_t m = 1; m <= 2; ++m)
    for (std::uint32_t n = 1; n <= 2; ++n) {
      auto target = ideal(q.R, ideal_power(J, m + n));
      for (const auto& a : ideal_power(J, m))
        for (const auto& b : ideal_power(J, n)) CHECK(target.contains(Vector{a * b}));
    }
}

TEST_CASE("radical_lift examples") {
  Qxy q;
  QuotientRing R(q.R);
  auto l = radical_lift(R, q.x + q.y, {q.x, q.y}, 2);
  CHECK(l.d == 3);
  CHECK(l.coefficients[0] * q.p("x^2") + l.coefficients[1] * q.p("y^2") == q.p("(x + y)^3"));

  auto R1 = PolyRing::make(Field::rationals(), {"x"});
  Poly x = Poly::variable(R1, 0);
  QuotientRing Q1(R1);
  auto l2 = radical_lift(Q1, x, {x}, 2);
  CHECK(l2.d == 2);
  CHECK(l2.coefficients[0] == Poly::constant(R1, 1));
  auto l3 = radical_lift(Q1, x, {x}, 1);
  CHECK(l3.d == 1);
  CHECK(l3.coefficients[0] == Poly::constant(R1, 1));

  CHECK_THROWS_AS(radical_lift(R, q.one, {q.x, q.y}, 2), StructuralError);

  // in a quotient ring the identity holds modulo the defining ideal
  QuotientRing Rq(q.R, {q.p("x*y")});
  auto l4 = radical_lift(Rq, q.x + q.y, {q.x, q.y}, 3);
  CHECK(l4.d == 3);
  Poly lhs = q.p("(x + y)^3") - l4.coefficients[0] * q.p("x^3") - l4.coefficients[1] * q.p("y^3") -
             l4.ring_coefficients[0] * q.p("x*y");
  CHECK(lhs.is_zero());
}

TEST_CASE("quotient ring ideal modules carry the defining relations") {
  Qxy q;
  QuotientRing R(q.R, {q.p("x*y")});
  auto I = R.ideal_module({q.x, q.y});
  CHECK(I.relations().contains(Vector{q.y, q.zero}));
  CHECK(I.relations().contains(Vector{q.zero, q.x}));
  CHECK(R.is_zero(q.p("x^2*y")));
  CHECK_FALSE(R.is_zero(q.p("x^2")));
}

#include <qkz/laurent.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace qkz;
using laurent::LaurentPoly;
using weyl::Weight;

namespace {

FieldElem v(Var x, int e = 1) { return FieldElem::variable(x, e); }

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::BadArgument;
}

// a small asymmetric sample to exercise substitutions and division
LaurentPoly sample2() {
  auto z1 = LaurentPoly::zpow(2, 1, 1), z2 = LaurentPoly::zpow(2, 2, 1);
  return z1 * z1 * z2.scaled(v(Var::q)) + z2 + LaurentPoly::zpow(2, 1, -1).scaled(v(Var::s, 2)) +
         LaurentPoly(2, 3);
}

}  // namespace

TEST_CASE("laurent arithmetic") {
  auto z1 = LaurentPoly::zpow(2, 1, 1);
  auto z1inv = LaurentPoly::zpow(2, 1, -1);
  REQUIRE(z1 * z1inv == LaurentPoly(2, 1));

  auto z2 = LaurentPoly::zpow(2, 2, 1);
  auto sq = (z1 + z2) * (z1 + z2);
  REQUIRE(sq == z1 * z1 + (z1 * z2).scaled(FieldElem(2)) + z2 * z2);
  REQUIRE(sq.num_terms() == 3);

  REQUIRE((sq * LaurentPoly(2)).is_zero());
  REQUIRE(sq.scaled(FieldElem()).is_zero());

  SECTION("coefficients may not contain position variables") {
    REQUIRE(code_of([&] { (void)z1.scaled(v(Var::z1)); }) == Errc::BadArgument);
  }
}

TEST_CASE("extract is linear") {
  auto f = sample2();
  auto g = LaurentPoly::monomial(2, {2, 1}, v(Var::qN)) + LaurentPoly(2, 5);
  Weight e{2, 1};
  REQUIRE((f + g).extract(e) == f.extract(e) + g.extract(e));
  REQUIRE(LaurentPoly(2, 1).extract({0, 0}).is_one());
  REQUIRE(f.extract({7, 7}).is_zero());
}

TEST_CASE("weyl substitution on z-variables") {
  auto z1 = LaurentPoly::zpow(2, 1, 1);
  REQUIRE(z1.weyl_substitute(0) == LaurentPoly::monomial(2, {-1, 0}, v(Var::s, 2)));
  REQUIRE(LaurentPoly::zpow(2, 2, 1).weyl_substitute(2) == LaurentPoly::zpow(2, 2, -1));
  auto z1z2 = LaurentPoly::zpow(2, 1, 1) * LaurentPoly::zpow(2, 2, 1);
  REQUIRE(z1z2.weyl_substitute(1) == z1z2);

  SECTION("each generator squares to the identity") {
    auto f = sample2();
    for (int i = 0; i <= 2; ++i) REQUIRE(f.weyl_substitute(i).weyl_substitute(i) == f);
  }

  SECTION("s0 rescales coefficients by powers of s") {
    auto f = LaurentPoly::zpow(2, 1, -3);
    REQUIRE(f.weyl_substitute(0) == LaurentPoly::monomial(2, {3, 0}, v(Var::s, -6)));
  }
}

TEST_CASE("substitution of a z-variable") {
  // z2 -> q^2 z1  on  z1 z2 + z2^2
  auto f = LaurentPoly::monomial(2, {1, 1}, FieldElem(1)) +
           LaurentPoly::monomial(2, {0, 2}, FieldElem(1));
  auto g = f.subst_z(2, v(Var::q, 2), 1, 1);
  REQUIRE(g == LaurentPoly::monomial(2, {2, 0}, v(Var::q, 2)) +
                   LaurentPoly::monomial(2, {2, 0}, v(Var::q, 4)));

  // z1 -> s^{-2} z1 rescales without moving support
  auto h = sample2().subst_z(1, v(Var::s, -2), 1, 1);
  REQUIRE(h.extract({2, 1}) == v(Var::q) * v(Var::s, -4));
  REQUIRE(h.extract({-1, 0}) == v(Var::s, 4));

  SECTION("zero image: positive powers vanish, negative powers are a pole") {
    auto z2sq = LaurentPoly::zpow(2, 2, 2);
    REQUIRE(z2sq.subst_z(2, FieldElem(), 0, 0).is_zero());
    REQUIRE(code_of([&] { (void)LaurentPoly::zpow(2, 2, -1).subst_z(2, FieldElem(), 0, 0); }) ==
            Errc::SubstitutionPole);
  }
}

TEST_CASE("exact division") {
  auto f = sample2();

  SECTION("multiples divide back exactly") {
    auto d = LaurentPoly(2, 1) -
             (LaurentPoly::zpow(2, 1, 1) * LaurentPoly::zpow(2, 2, -1)).scaled(v(Var::q, 2));
    REQUIRE((f * d).divexact(d) == f);
  }

  SECTION("divisor with negative exponents") {
    // s^2 z1^{-2} - 1 = (s z1^{-1} - 1)(s z1^{-1} + 1)
    auto a = LaurentPoly::monomial(2, {-2, 0}, v(Var::s, 2)) - LaurentPoly(2, 1);
    auto b = LaurentPoly::monomial(2, {-1, 0}, v(Var::s)) - LaurentPoly(2, 1);
    auto q = a.divexact(b);
    REQUIRE(q == LaurentPoly::monomial(2, {-1, 0}, v(Var::s)) + LaurentPoly(2, 1));
  }

  SECTION("non-multiples are refused") {
    auto d = LaurentPoly::zpow(2, 1, 1) + LaurentPoly(2, 1);
    REQUIRE_FALSE((f + LaurentPoly(2, 1)).divide(d * f).has_value());
    REQUIRE(code_of([&] { (void)LaurentPoly(2, 1).divexact(d); }) == Errc::NonPolynomialResult);
  }

  SECTION("division by zero") {
    REQUIRE(code_of([&] { (void)f.divide(LaurentPoly(2)); }) == Errc::DivisionByZero);
  }

  SECTION("antisymmetrised polynomials divide by the simple-root factor") {
    // (s_i - 1)f is divisible by 1 - z_i/z_{i+1}; this is what the Demazure
    //-type operators rely on.
    auto d1 = LaurentPoly(2, 1) - LaurentPoly::zpow(2, 1, 1) * LaurentPoly::zpow(2, 2, -1);
    REQUIRE((f.weyl_substitute(1) - f).divide(d1).has_value());

    auto d0 = LaurentPoly(2, 1) - LaurentPoly::monomial(2, {-2, 0}, v(Var::s, 2));
    REQUIRE((f.weyl_substitute(0) - f).divide(d0).has_value());

    auto dN = LaurentPoly(2, 1) - LaurentPoly::zpow(2, 2, 2);
    REQUIRE((f.weyl_substitute(2) - f).divide(dN).has_value());
  }
}

TEST_CASE("conversion to and from the rational-function field") {
  auto f = sample2();
  REQUIRE(LaurentPoly::from_field(2, f.to_field()) == f);

  SECTION("z-monomial denominators are fine") {
    FieldElem g = (v(Var::q) + v(Var::z1, 2)) / (v(Var::z1) * v(Var::z2, 3));
    auto lp = LaurentPoly::from_field(2, g);
    REQUIRE(lp.extract({-1, -3}) == v(Var::q));
    REQUIRE(lp.extract({1, -3}).is_one());
  }

  SECTION("true z-denominators are rejected") {
    FieldElem g = FieldElem(1) / (FieldElem(1) + v(Var::z1));
    REQUIRE(code_of([&] { (void)LaurentPoly::from_field(2, g); }) == Errc::NonPolynomialResult);
  }
}

TEST_CASE("leading structure under the triangularity order") {
  auto f = LaurentPoly::monomial(2, {3, 2}, FieldElem(1)) +
           LaurentPoly::monomial(2, {2, 1}, v(Var::q));
  auto [e, c] = f.leading_term();
  REQUIRE(e == Weight{3, 2});
  REQUIRE(c.is_one());

  SECTION("incomparable support is ambiguous") {
    auto g = LaurentPoly::monomial(2, {2, 2}, FieldElem(1)) +
             LaurentPoly::monomial(2, {3, 0}, FieldElem(1));
    REQUIRE(g.maximal_exponents().size() == 2);
    REQUIRE(code_of([&] { (void)g.leading_term(); }) == Errc::AmbiguousLeading);
    REQUIRE(code_of([&] { (void)LaurentPoly(2).leading_term(); }) == Errc::BadArgument);
  }

  SECTION("same orbit, dominance-comparable exponents") {
    auto g = LaurentPoly::monomial(2, {2, 1}, FieldElem(1)) +
             LaurentPoly::monomial(2, {-1, 2}, v(Var::q)) +
             LaurentPoly::monomial(2, {1, 2}, v(Var::s));
    REQUIRE(g.leading_term().first == Weight{2, 1});
  }
}

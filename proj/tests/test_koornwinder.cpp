#include <qkz/koornwinder.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace qkz;
using koornwinder::Engine;
using koornwinder::SpecCase;
using koornwinder::SpecDescriptor;
using laurent::LaurentPoly;
using weyl::Weight;

namespace {

FieldElem v(Var x, int e = 1) { return FieldElem::variable(x, e); }

Engine& eng2() {
  static Engine e(2);
  return e;
}

Engine& eng3() {
  static Engine e(3);
  return e;
}

bool triangular(const koornwinder::KoornwinderPoly& E) {
  for (const auto& [mu, c] : E.poly.terms()) {
    auto cmp = weyl::compare(mu, E.lambda);
    if (cmp != weyl::Cmp::Less && cmp != weyl::Cmp::Equal) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("specialization descriptors") {
  SpecDescriptor two{SpecCase::TwoBoundary, 1, +1, false};
  REQUIRE(two.level() == std::pair<int, int>(1, 2));
  auto sub2 = two.substitution();
  REQUIRE(sub2.apply(v(Var::s, 2) * v(Var::q, 4)) == FieldElem(1));

  SpecDescriptor minus{SpecCase::TwoBoundary, 3, -1, false};
  REQUIRE(minus.substitution().apply(v(Var::q)) == -v(Var::p, -3));
  REQUIRE(minus.substitution().apply(v(Var::s, 6) * v(Var::q, 4)) == FieldElem(1));

  SpecDescriptor one{SpecCase::OneBoundary, 1, +1, true};
  REQUIRE(one.level() == std::pair<int, int>(2, 3));
  auto sub1 = one.substitution();
  // the defining locus holds modulo p^2 = -1, on the q^3 s^2 = +1 component
  REQUIRE(gaussian_equal(sub1.apply(v(Var::s, 4) * v(Var::q, 6)), FieldElem(1)));
  REQUIRE(gaussian_equal(sub1.apply(v(Var::q, 3) * v(Var::s, 2)), FieldElem(1)));
  REQUIRE(sub1.apply(v(Var::qN, 2) + v(Var::q)).is_zero());

  REQUIRE_THROWS_AS((SpecDescriptor{SpecCase::OneBoundary, 2, +1, true}.substitution()),
                    Error);
  // q_N^2 = -q is rational only on the branch q = -p^{-r} with even r
  REQUIRE_THROWS_AS((SpecDescriptor{SpecCase::TwoBoundary, 1, +1, true}.substitution()),
                    Error);
  auto subqn = SpecDescriptor{SpecCase::TwoBoundary, 2, -1, true}.substitution();
  REQUIRE(subqn.apply(v(Var::qN, 2) + v(Var::q)).is_zero());
}

TEST_CASE("constant polynomial") {
  const auto& E = eng3().E(Weight{0, 0, 0});
  REQUIRE(E.poly == LaurentPoly(3, 1));
  for (int i = 1; i <= 3; ++i)
    REQUIRE(E.eigenvalues[i - 1] == v(Var::q, 2 * (3 - i)) * v(Var::q0) * v(Var::qN));

  auto one = koornwinder::specialize_E(E, SpecDescriptor{SpecCase::OneBoundary, 1, +1, true});
  REQUIRE(one == LaurentPoly(3, 1));
}

TEST_CASE("rank-two dominant polynomial") {
  const auto& E = eng2().E(Weight{2, 1});
  REQUIRE(E.poly.extract(Weight{2, 1}) == FieldElem(1));
  REQUIRE(triangular(E));
  REQUIRE(E.eigenvalues[0] == v(Var::s, 4) * v(Var::q, 2) * v(Var::q0) * v(Var::qN));
  REQUIRE(E.eigenvalues[1] == v(Var::s, 2) * v(Var::q0) * v(Var::qN));

  SECTION("enumeration order does not matter") {
    Engine other(2, true);
    REQUIRE(other.E(Weight{2, 1}).poly == E.poly);
    REQUIRE(other.E(Weight{2, -1}).poly == eng2().E(Weight{2, -1}).poly);
  }
}

TEST_CASE("orbit basis properties") {
  SpecDescriptor two{SpecCase::TwoBoundary, 1, +1, false};
  auto span = koornwinder::build_span(weyl::nu_family(2, 1, 1, +1), two);
  REQUIRE(span.size() == 4);
  for (const Weight& lam : span) {
    const auto& E = eng2().E(lam);
    REQUIRE(E.poly.extract(lam) == FieldElem(1));
    REQUIRE(triangular(E));
    for (int i = 1; i <= 2; ++i)
      REQUIRE(E.eigenvalues[i - 1] == hecke::y_eigenvalue(lam, i));
  }
}

TEST_CASE("intertwiners move along the orbit") {
  const auto& ctx = eng2().ctx();
  auto step = [&](const Weight& lam, int i) {
    const auto& E = eng2().E(lam);
    auto [g, c] = hecke::intertwiner(ctx, i, E.poly, lam);
    REQUIRE(!c.is_zero());
    REQUIRE(g == eng2().E(weyl::act(i, lam)).poly.scaled(c));
  };
  step(Weight{2, 1}, 1);    // to (1,2)
  step(Weight{2, 1}, 2);    // to (2,-1)
  step(Weight{2, -1}, 1);   // to (-1,2)
  step(Weight{-1, 2}, 2);   // to (-1,-2)
}

TEST_CASE("boundary intertwiner scalar vanishes on the constrained locus") {
  const Weight xi0{0, 1};
  const auto& E = eng2().E(xi0);
  auto [g, c] = hecke::intertwiner(eng2().ctx(), 2, E.poly, xi0);
  REQUIRE(!c.is_zero());
  // partial substitution (only q_N^2 = -q) is not enough to kill it
  Substitution qn;
  qn.set(Var::q, -v(Var::t, 2));
  qn.set(Var::qN, v(Var::t));
  REQUIRE(!qn.apply(c).is_zero());
  // pinning s rationally (q^3 s^2 = -1 component) does not kill it either
  Substitution rat = qn;
  rat.set(Var::s, v(Var::t, -3));
  REQUIRE(!rat.apply(c).is_zero());
  // the vanishing lives on the q^3 s^2 = +1 component, reached via p^2 = -1:
  // nonzero as a rational function in p, t, but zero in the quotient
  auto full = SpecDescriptor{SpecCase::OneBoundary, 1, +1, true}.substitution();
  REQUIRE(!full.apply(c).is_zero());
  REQUIRE(gaussian_is_zero(full.apply(c)));
}

TEST_CASE("dominant and antidominant families flatten at the two-boundary locus") {
  for (int omega : {+1, -1}) {
    SpecDescriptor spec{SpecCase::TwoBoundary, 1, omega, false};
    auto ctxs = hecke::Ctx::specialized(2, spec.substitution());
    for (int sign : {+1, -1}) {
      const auto& E = eng2().E(weyl::nu_family(2, 1, 1, sign));
      auto Ehat = koornwinder::specialize_E(E, spec);
      REQUIRE(!Ehat.is_zero());
      auto resid = hecke::apply_T(ctxs, 1, Ehat) - Ehat.scaled(ctxs.q.inverse());
      REQUIRE(resid.is_zero());
    }
  }
}

TEST_CASE("breakpoint family flattens at the one-boundary locus") {
  SpecDescriptor spec{SpecCase::OneBoundary, 1, +1, true};
  auto sub = spec.substitution();
  // coefficients live in the quotient by p^2 + 1, so "zero" means every
  // coefficient reduces to zero there
  auto gzero = [](const LaurentPoly& f) {
    for (const auto& [w, c] : f.terms())
      if (!gaussian_is_zero(c)) return false;
    return true;
  };

  SECTION("N=2") {
    auto ctxs = hecke::Ctx::specialized(2, sub);
    auto Ehat = koornwinder::specialize_E(eng2().E(weyl::xi0_family(2, 1)), spec);
    REQUIRE(!Ehat.is_zero());
    // (0,1) breaks at position 1, so the single bulk operator does not
    // flatten; the boundary one does
    REQUIRE(!gzero(hecke::apply_T(ctxs, 1, Ehat) - Ehat.scaled(ctxs.q.inverse())));
    REQUIRE(gzero(hecke::apply_T(ctxs, 2, Ehat) - Ehat.scaled(ctxs.qN.inverse())));
  }

  SECTION("N=3") {
    auto ctxs = hecke::Ctx::specialized(3, sub);
    auto Ehat = koornwinder::specialize_E(eng3().E(weyl::xi0_family(3, 1)), spec);
    REQUIRE(!Ehat.is_zero());
    REQUIRE(gzero(hecke::apply_T(ctxs, 1, Ehat) - Ehat.scaled(ctxs.q.inverse())));
    REQUIRE(!gzero(hecke::apply_T(ctxs, 2, Ehat) - Ehat.scaled(ctxs.q.inverse())));
    REQUIRE(gzero(hecke::apply_T(ctxs, 3, Ehat) - Ehat.scaled(ctxs.qN.inverse())));
  }
}

TEST_CASE("one-boundary eigenvalue list") {
  SpecDescriptor spec{SpecCase::OneBoundary, 1, +1, true};

  // each eigenvalue carries s^{2 lam_i} = p^{2 lam_i} t^{-6 lam_i}, so an odd
  // entry of the weight contributes p^2 = -1: the signs below are real
  SECTION("breakpoint weight at N=3") {
    auto xi0 = weyl::xi0_family(3, 1);
    REQUIRE(xi0 == Weight{2, 0, 1});
    const auto& E = eng3().E(xi0);
    auto y = koornwinder::specialize_eigenvalues(E, spec);
    REQUIRE(gaussian_equal(y[0], v(Var::q0) * v(Var::t, -3)));
    REQUIRE(gaussian_equal(y[1], v(Var::q0) * v(Var::t)));
    REQUIRE(gaussian_equal(y[2], -v(Var::q0) * v(Var::t, -1)));
    REQUIRE(!gaussian_equal(y[2], v(Var::q0) * v(Var::t, -1)));
  }

  SECTION("breakpoint weight at N=2") {
    auto xi0 = weyl::xi0_family(2, 1);
    REQUIRE(xi0 == Weight{0, 1});
    auto y = koornwinder::specialize_eigenvalues(eng2().E(xi0), spec);
    REQUIRE(gaussian_equal(y[0], v(Var::q0) * v(Var::t)));
    REQUIRE(gaussian_equal(y[1], -v(Var::q0) * v(Var::t, -1)));
  }

  SECTION("odd companion weight at N=3") {
    auto xi1 = weyl::xi1_family(3, 1);
    REQUIRE(xi1 == Weight{1, 2, 0});
    auto y = koornwinder::specialize_eigenvalues(eng3().E(xi1), spec);
    REQUIRE(gaussian_equal(y[0], -v(Var::q0) * v(Var::t, -1)));
    REQUIRE(gaussian_equal(y[1], v(Var::q0) * v(Var::t, -3)));
    REQUIRE(gaussian_equal(y[2], v(Var::q0) * v(Var::t)));
  }
}

TEST_CASE("one-boundary spans") {
  SpecDescriptor spec{SpecCase::OneBoundary, 1, +1, true};
  auto span = koornwinder::build_span(weyl::xi0_family(3, 1), spec);
  auto nonneg = koornwinder::restrict_nonneg(span);
  REQUIRE(nonneg.size() == 3);
  std::vector<Weight> expect = {{1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  REQUIRE(nonneg == expect);
}

TEST_CASE("expansion over the triangular basis") {
  std::map<Weight, LaurentPoly> basis;
  for (const Weight& lam :
       {Weight{2, 1}, Weight{2, -1}, Weight{-1, 2}, Weight{-1, -2}, Weight{0, 0}})
    basis.emplace(lam, eng2().E(lam).poly);

  auto f = basis.at(Weight{2, 1}).scaled(FieldElem(3)) +
           basis.at(Weight{-1, 2}).scaled(v(Var::q)) +
           basis.at(Weight{0, 0}).scaled(v(Var::qN, -1));
  auto coeffs = koornwinder::expand_in_basis(f, basis);
  REQUIRE(coeffs.size() == 3);
  REQUIRE(coeffs.at(Weight{2, 1}) == FieldElem(3));
  REQUIRE(coeffs.at(Weight{-1, 2}) == v(Var::q));
  REQUIRE(coeffs.at(Weight{0, 0}) == v(Var::qN, -1));

  auto g = LaurentPoly::zpow(2, 1, 3);
  REQUIRE_THROWS_AS(koornwinder::expand_in_basis(g, basis), Error);
}

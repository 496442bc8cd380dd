#include <qkz/hecke.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace qkz;
using hecke::Ctx;
using laurent::LaurentPoly;
using weyl::Weight;

namespace {

FieldElem v(Var x, int e = 1) { return FieldElem::variable(x, e); }

struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed ? seed : 1) {}
  uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  int range(int lo, int hi) { return lo + static_cast<int>(next() % (hi - lo + 1)); }
};

LaurentPoly random_poly(Rng& rng, int n, int terms) {
  static const std::vector<FieldElem> pool = {
      FieldElem(1), FieldElem(2),      FieldElem(-1),     v(Var::q),
      v(Var::s),    v(Var::qN),        v(Var::q0),        v(Var::zetaN),
      v(Var::zeta0)};
  LaurentPoly f(n);
  for (int t = 0; t < terms; ++t) {
    Weight e(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) e[i] = rng.range(-2, 2);
    f += LaurentPoly::monomial(n, e, pool[rng.next() % pool.size()]);
  }
  return f;
}

Substitution two_boundary_sub(int r, int omega) {
  return Substitution()
      .set(Var::s, v(Var::p, 2))
      .set(Var::q, FieldElem(omega) * v(Var::p, -r));
}

}  // namespace

TEST_CASE("Noumi operators on constants") {
  auto c = Ctx::generic(3);
  const LaurentPoly one(3, 1);
  REQUIRE(hecke::apply_T(c, 0, one) == one.scaled(-v(Var::q0)));
  REQUIRE(hecke::apply_T(c, 1, one) == one.scaled(-v(Var::q)));
  REQUIRE(hecke::apply_T(c, 2, one) == one.scaled(-v(Var::q)));
  REQUIRE(hecke::apply_T(c, 3, one) == one.scaled(-v(Var::qN)));
  REQUIRE(hecke::apply_e(c, 0, one) == one.scaled(-v(Var::q0) - v(Var::q0, -1)));
  REQUIRE(hecke::apply_e(c, 3, one) == one.scaled(-v(Var::qN) - v(Var::qN, -1)));
}

TEST_CASE("bulk operator on a single variable") {
  auto c = Ctx::generic(2);
  auto z1 = LaurentPoly::zpow(2, 1, 1);
  REQUIRE(hecke::apply_T(c, 1, z1) == LaurentPoly::zpow(2, 2, 1).scaled(-v(Var::q, -1)));

  auto g = hecke::apply_T(c, 1, z1) + z1.scaled(v(Var::q));      // (T+q) z1
  auto h = hecke::apply_T(c, 1, g) - g.scaled(v(Var::q, -1));    // (T-1/q)(T+q) z1
  REQUIRE(h.is_zero());
}

TEST_CASE("quadratic relations") {
  for (int N : {2, 3}) {
    auto c = Ctx::generic(N);
    Rng rng(0x9e3779b97f4a7c15ull + N);
    const int reps = N == 2 ? 20 : 6;
    for (int t = 0; t < reps; ++t) {
      auto f = random_poly(rng, N, 3);
      for (int i = 0; i <= N; ++i) {
        const FieldElem& qi = c.qi(i);
        auto g = hecke::apply_T(c, i, f) + f.scaled(qi);
        auto h = hecke::apply_T(c, i, g) - g.scaled(qi.inverse());
        REQUIRE(h.is_zero());
      }
    }
  }
}

TEST_CASE("braid and commutation relations") {
  using hecke::apply_T;
  for (int N : {2, 3}) {
    auto c = Ctx::generic(N);
    Rng rng(0xc0ffee + N);
    for (int t = 0; t < 4; ++t) {
      auto f = random_poly(rng, N, 3);
      SECTION("boundary braids, N=" + std::to_string(N) + " sample " + std::to_string(t)) {
        auto lhs = apply_T(c, 0, apply_T(c, 1, apply_T(c, 0, apply_T(c, 1, f))));
        auto rhs = apply_T(c, 1, apply_T(c, 0, apply_T(c, 1, apply_T(c, 0, f))));
        REQUIRE(lhs == rhs);
        auto lhsN =
            apply_T(c, N, apply_T(c, N - 1, apply_T(c, N, apply_T(c, N - 1, f))));
        auto rhsN =
            apply_T(c, N - 1, apply_T(c, N, apply_T(c, N - 1, apply_T(c, N, f))));
        REQUIRE(lhsN == rhsN);
      }
    }
  }

  SECTION("bulk braid and distant commutation, N=3") {
    auto c = Ctx::generic(3);
    Rng rng(0xabcdef);
    for (int t = 0; t < 4; ++t) {
      auto f = random_poly(rng, 3, 3);
      REQUIRE(hecke::apply_T(c, 1, hecke::apply_T(c, 2, hecke::apply_T(c, 1, f))) ==
              hecke::apply_T(c, 2, hecke::apply_T(c, 1, hecke::apply_T(c, 2, f))));
      REQUIRE(hecke::apply_T(c, 0, hecke::apply_T(c, 2, f)) ==
              hecke::apply_T(c, 2, hecke::apply_T(c, 0, f)));
      REQUIRE(hecke::apply_T(c, 1, hecke::apply_T(c, 3, f)) ==
              hecke::apply_T(c, 3, hecke::apply_T(c, 1, f)));
      REQUIRE(hecke::apply_T(c, 0, hecke::apply_T(c, 3, f)) ==
              hecke::apply_T(c, 3, hecke::apply_T(c, 0, f)));
    }
  }
}

TEST_CASE("inverse operators") {
  auto c = Ctx::generic(2);
  Rng rng(0x5151);
  for (int t = 0; t < 5; ++t) {
    auto f = random_poly(rng, 2, 3);
    for (int i = 0; i <= 2; ++i)
      REQUIRE(hecke::apply_Tinv(c, i, hecke::apply_T(c, i, f)) == f);
    for (int i = 1; i <= 2; ++i)
      REQUIRE(hecke::apply_Yinv(c, i, hecke::apply_Y(c, i, f)) == f);
  }
}

TEST_CASE("translation operators") {
  SECTION("scalar action on the constant") {
    for (int N : {1, 2, 3}) {
      auto c = Ctx::generic(N);
      const LaurentPoly one(N, 1);
      for (int i = 1; i <= N; ++i) {
        auto y = hecke::apply_Y(c, i, one);
        REQUIRE(y == one.scaled(v(Var::q, 2 * (N - i)) * v(Var::q0) * v(Var::qN)));
        REQUIRE(y.extract(Weight(N, 0)) == hecke::y_eigenvalue(Weight(N, 0), i));
      }
    }
  }

  SECTION("commutativity") {
    for (int N : {2, 3}) {
      auto c = Ctx::generic(N);
      Rng rng(0x77aa + N);
      const int reps = N == 2 ? 20 : 5;
      for (int t = 0; t < reps; ++t) {
        auto f = random_poly(rng, N, 2);
        for (int i = 1; i <= N; ++i)
          for (int j = i + 1; j <= N; ++j)
            REQUIRE(hecke::apply_Y(c, i, hecke::apply_Y(c, j, f)) ==
                    hecke::apply_Y(c, j, hecke::apply_Y(c, i, f)));
      }
    }
  }

  SECTION("mixed T-Y relations") {
    for (int N : {2, 3}) {
      auto c = Ctx::generic(N);
      Rng rng(0xbead + N);
      for (int t = 0; t < 3; ++t) {
        auto f = random_poly(rng, N, 2);
        for (int i = 1; i <= N - 1; ++i)
          REQUIRE(hecke::apply_T(c, i, hecke::apply_Y(c, i + 1, hecke::apply_T(c, i, f))) ==
                  hecke::apply_Y(c, i, f));
        // T_N^{-1} Y_N = Y_N^{-1} T_N - (q0 - 1/q0)
        auto lhs = hecke::apply_Tinv(c, N, hecke::apply_Y(c, N, f));
        auto rhs = hecke::apply_Yinv(c, N, hecke::apply_T(c, N, f)) -
                   f.scaled(v(Var::q0) - v(Var::q0, -1));
        REQUIRE(lhs == rhs);
        if (N == 3) {
          REQUIRE(hecke::apply_T(c, 1, hecke::apply_Y(c, 3, f)) ==
                  hecke::apply_Y(c, 3, hecke::apply_T(c, 1, f)));
          REQUIRE(hecke::apply_T(c, 3, hecke::apply_Y(c, 1, f)) ==
                  hecke::apply_Y(c, 1, hecke::apply_T(c, 3, f)));
          REQUIRE(hecke::apply_T(c, 3, hecke::apply_Y(c, 2, f)) ==
                  hecke::apply_Y(c, 2, hecke::apply_T(c, 3, f)));
        }
      }
    }
  }
}

TEST_CASE("TL generators inside the polynomial representation") {
  auto c = Ctx::generic(3);
  Rng rng(0xfeed);
  for (int t = 0; t < 4; ++t) {
    auto f = random_poly(rng, 3, 3);
    SECTION("idempotent-type relation, sample " + std::to_string(t)) {
      for (int i = 0; i <= 3; ++i) {
        auto e = hecke::apply_e(c, i, f);
        auto ee = hecke::apply_e(c, i, e);
        REQUIRE(ee == e.scaled(-(c.qi(i) + c.qi(i).inverse())));
      }
    }
    SECTION("bulk braid consequence, sample " + std::to_string(t)) {
      auto e121 = hecke::apply_e(c, 1, hecke::apply_e(c, 2, hecke::apply_e(c, 1, f)));
      auto e212 = hecke::apply_e(c, 2, hecke::apply_e(c, 1, hecke::apply_e(c, 2, f)));
      REQUIRE(e121 - hecke::apply_e(c, 1, f) == e212 - hecke::apply_e(c, 2, f));
    }
  }

  SECTION("uniform-q convention differs at the boundary only") {
    auto f = random_poly(rng, 3, 2);
    REQUIRE(hecke::apply_e(c, 1, f, hecke::EhatConvention::UniformQ) ==
            hecke::apply_e(c, 1, f));
    auto d = hecke::apply_e(c, 0, f, hecke::EhatConvention::UniformQ) -
             hecke::apply_e(c, 0, f);
    REQUIRE(d == f.scaled(v(Var::q0, -1) - v(Var::q, -1)));
  }
}

TEST_CASE("translation eigenvalues by weight") {
  SECTION("dominant family, generic and specialized") {
    const int N = 3, r = 1, J = 1;
    auto nu = weyl::nu_family(N, r, J, +1);
    for (int i = 1; i <= N; ++i) {
      auto y = hecke::y_eigenvalue(nu, i);
      REQUIRE(y == v(Var::s, 2 * (J + r * (N - i))) * v(Var::q, 2 * (N - i)) * v(Var::q0) *
                       v(Var::qN));
      auto sub = two_boundary_sub(r, +1);
      REQUIRE(sub.apply(y) ==
              sub.apply(v(Var::q, -2 * (N - i)) * v(Var::s, 2 * J) * v(Var::q0) * v(Var::qN)));
    }
  }

  SECTION("antidominant family under the specialization") {
    const int N = 3, r = 1, J = 1;
    auto nu = weyl::nu_family(N, r, J, -1);
    auto sub = two_boundary_sub(r, +1);
    for (int i = 1; i <= N; ++i)
      REQUIRE(sub.apply(hecke::y_eigenvalue(nu, i)) ==
              sub.apply(v(Var::q, 2 * (i - 1)) * v(Var::s, -2 * J) * v(Var::q0, -1) *
                        v(Var::qN, -1)));
  }

  SECTION("dominant weights see the untwisted exponents") {
    auto d = weyl::weight_data(Weight{5, 3, 2});
    REQUIRE(d.rho_image == Weight{2, 1, 0});
  }
}

TEST_CASE("intertwiner corner cases") {
  // rig q0 = 1/qN so that y(0)_N = 1 and the boundary intertwiner denominator
  // vanishes
  auto c = Ctx::specialized(2, Substitution().set(Var::q0, v(Var::qN, -1)));
  try {
    hecke::intertwiner(c, 2, LaurentPoly(2, 1), Weight{0, 0});
    FAIL("expected DegenerateEigenvalue");
  } catch (const Error& e) {
    REQUIRE(e.code() == Errc::DegenerateEigenvalue);
  }
}

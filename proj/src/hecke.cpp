#include <qkz/hecke.hpp>

namespace qkz::hecke {

Ctx Ctx::generic(int N) {
  Ctx c;
  c.N = N;
  c.q = FieldElem::variable(Var::q);
  c.s = FieldElem::variable(Var::s);
  c.q0 = FieldElem::variable(Var::q0);
  c.qN = FieldElem::variable(Var::qN);
  c.zeta0 = FieldElem::variable(Var::zeta0);
  c.zetaN = FieldElem::variable(Var::zetaN);
  return c;
}

Ctx Ctx::specialized(int N, const Substitution& sub) {
  Ctx c = generic(N);
  c.q = sub.apply(c.q);
  c.s = sub.apply(c.s);
  c.q0 = sub.apply(c.q0);
  c.qN = sub.apply(c.qN);
  c.zeta0 = sub.apply(c.zeta0);
  c.zetaN = sub.apply(c.zetaN);
  return c;
}

const FieldElem& Ctx::qi(int i) const {
  if (i == 0) return q0;
  if (i == N) return qN;
  if (i < 0 || i > N) fail(Errc::BadArgument, "qi: index out of range");
  return q;
}

namespace {

LaurentPoly zmono(int n, int i, int e, const FieldElem& c) {
  Weight exp(static_cast<std::size_t>(n), 0);
  exp[i - 1] = e;
  return LaurentPoly::monomial(n, exp, c);
}

}  // namespace

LaurentPoly apply_T(const Ctx& c, int i, const LaurentPoly& f) {
  const int N = c.N;
  if (f.n() != N) fail(Errc::BadArgument, "apply_T: wrong variable count");
  if (i < 0 || i > N) fail(Errc::BadArgument, "apply_T: index out of range");
  const FieldElem& qi = c.qi(i);
  LaurentPoly diff = f.weyl_substitute(i, c.s * c.s) - f;
  LaurentPoly out = f.scaled(-qi);
  if (diff.is_zero()) return out;

  LaurentPoly num(N), den(N);
  const LaurentPoly one(N, 1);
  if (i == 0) {
    num = (one - zmono(N, 1, -1, c.s * c.q0 * c.zeta0.inverse())) *
          (one + zmono(N, 1, -1, c.s * c.q0 * c.zeta0));
    den = one - zmono(N, 1, -2, c.s * c.s);
  } else if (i == N) {
    num = (one + zmono(N, N, 1, c.qN * c.zetaN)) * (one - zmono(N, N, 1, c.qN * c.zetaN.inverse()));
    den = one - zmono(N, N, 2, FieldElem(1));
  } else {
    num = one - zmono(N, i, 1, c.q * c.q) * LaurentPoly::zpow(N, i + 1, -1);
    den = one - LaurentPoly::zpow(N, i, 1) * LaurentPoly::zpow(N, i + 1, -1);
  }
  // (s_i - 1)f is already divisible by den, so divide first and keep the
  // intermediate polynomial small before multiplying by the numerator.
  return out - (num * diff.divexact(den)).scaled(qi.inverse());
}

LaurentPoly apply_Tinv(const Ctx& c, int i, const LaurentPoly& f) {
  const FieldElem& qi = c.qi(i);
  return apply_T(c, i, f) + f.scaled(qi - qi.inverse());
}

LaurentPoly apply_e(const Ctx& c, int i, const LaurentPoly& f, EhatConvention conv) {
  const FieldElem& shift = conv == EhatConvention::BoundaryParam ? c.qi(i) : c.q;
  return apply_T(c, i, f) - f.scaled(shift.inverse());
}

std::vector<Op> y_word(int N, int i) {
  if (i < 1 || i > N) fail(Errc::BadArgument, "y_word: index out of range");
  std::vector<Op> w;
  for (int j = i; j <= N; ++j) w.push_back({Op::Kind::T, j});
  for (int j = N - 1; j >= 0; --j) w.push_back({Op::Kind::T, j});
  for (int j = 1; j <= i - 1; ++j) w.push_back({Op::Kind::Tinv, j});
  return w;
}

namespace {

std::vector<Op> yinv_word(int N, int i) {
  std::vector<Op> w;
  for (int j = i - 1; j >= 1; --j) w.push_back({Op::Kind::T, j});
  for (int j = 0; j <= N; ++j) w.push_back({Op::Kind::Tinv, j});
  for (int j = N - 1; j >= i; --j) w.push_back({Op::Kind::Tinv, j});
  return w;
}

}  // namespace

LaurentPoly apply_Y(const Ctx& c, int i, const LaurentPoly& f) {
  return apply_word(c, y_word(c.N, i), f);
}

LaurentPoly apply_Yinv(const Ctx& c, int i, const LaurentPoly& f) {
  if (i < 1 || i > c.N) fail(Errc::BadArgument, "apply_Yinv: index out of range");
  return apply_word(c, yinv_word(c.N, i), f);
}

LaurentPoly apply_word(const Ctx& c, const std::vector<Op>& word, LaurentPoly f) {
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    switch (it->kind) {
      case Op::Kind::T:
        f = apply_T(c, it->i, f);
        break;
      case Op::Kind::Tinv:
        f = apply_Tinv(c, it->i, f);
        break;
      case Op::Kind::E:
        f = apply_e(c, it->i, f);
        break;
      case Op::Kind::Y:
        f = apply_Y(c, it->i, f);
        break;
      case Op::Kind::Yinv:
        f = apply_Yinv(c, it->i, f);
        break;
    }
  }
  return f;
}

FieldElem y_eigenvalue(const Ctx& c, const Weight& lam, int i) {
  const int N = static_cast<int>(lam.size());
  if (i < 1 || i > N) fail(Errc::BadArgument, "y_eigenvalue: index out of range");
  const auto d = weyl::weight_data(lam);
  FieldElem y = c.s.pow(2 * lam[i - 1]) * c.q.pow(2 * d.rho_image[i - 1]);
  return y * (c.q0 * c.qN).pow(d.sigma[i - 1]);
}

FieldElem y_eigenvalue(const Weight& lam, int i) {
  return y_eigenvalue(Ctx::generic(static_cast<int>(lam.size())), lam, i);
}

FieldElem intertwiner_scalar(const Ctx& c, int i, const Weight& lam) {
  const int N = c.N;
  if (i < 1 || i > N) fail(Errc::BadArgument, "intertwiner: index out of range");
  if (i < N) {
    FieldElem ratio = y_eigenvalue(c, lam, i + 1) / y_eigenvalue(c, lam, i);
    FieldElem den = ratio - FieldElem(1);
    if (den.is_zero()) fail(Errc::DegenerateEigenvalue, "intertwiner: unit eigenvalue ratio");
    return (c.q.inverse() - c.q) / den;
  }
  FieldElem yN = y_eigenvalue(c, lam, N);
  FieldElem den = yN.pow(-2) - FieldElem(1);
  if (den.is_zero()) fail(Errc::DegenerateEigenvalue, "intertwiner: eigenvalue square is one");
  return ((c.qN.inverse() - c.qN) + (c.q0.inverse() - c.q0) * yN.inverse()) / den;
}

std::pair<LaurentPoly, FieldElem> intertwiner(const Ctx& c, int i, const LaurentPoly& E,
                                              const Weight& lam) {
  FieldElem scal = intertwiner_scalar(c, i, lam);
  LaurentPoly g = apply_T(c, i, E) + E.scaled(scal);
  return {g, g.extract(weyl::act(i, lam))};
}

}  // namespace qkz::hecke

#pragma once

#include <qkz/laurent.hpp>

#include <utility>
#include <vector>

namespace qkz::hecke {

using laurent::LaurentPoly;
using weyl::Weight;

// The TL-generator shift uses q_i (boundary parameters at i = 0, N) by
// default; the uniform-q variant subtracts q^{-1} at every index.
enum class EhatConvention { BoundaryParam, UniformQ };

// Parameter environment the operators are built from. Generic contexts carry
// the plain variables; specialized ones carry their images, so operators act
// directly on polynomials whose coefficients already live in the target
// parameter ring.
struct Ctx {
  int N = 0;
  FieldElem q, s, q0, qN, zeta0, zetaN;

  static Ctx generic(int N);
  static Ctx specialized(int N, const Substitution& sub);
  const FieldElem& qi(int i) const;  // parameter attached to T_i
};

LaurentPoly apply_T(const Ctx& c, int i, const LaurentPoly& f);
LaurentPoly apply_Tinv(const Ctx& c, int i, const LaurentPoly& f);
LaurentPoly apply_e(const Ctx& c, int i, const LaurentPoly& f,
                    EhatConvention conv = EhatConvention::BoundaryParam);
LaurentPoly apply_Y(const Ctx& c, int i, const LaurentPoly& f);
LaurentPoly apply_Yinv(const Ctx& c, int i, const LaurentPoly& f);

struct Op {
  enum class Kind { T, Tinv, E, Y, Yinv } kind;
  int i;
};

// Bernstein-Zelevinsky expansion of Y_i as a T-word; leftmost factor is the
// outermost operator.
std::vector<Op> y_word(int N, int i);

// Word composition: word[0] o word[1] o ... (rightmost entry hits f first).
LaurentPoly apply_word(const Ctx& c, const std::vector<Op>& word, LaurentPoly f);

FieldElem y_eigenvalue(const Weight& lam, int i);                // generic parameters
FieldElem y_eigenvalue(const Ctx& c, const Weight& lam, int i);  // context images

// Scalar correction attached to phi_i at weight lam: phi_i = T_i + scalar.
// Throws DegenerateEigenvalue when the eigenvalue ratio makes it singular.
FieldElem intertwiner_scalar(const Ctx& c, int i, const Weight& lam);

// phi_i applied to the eigenfunction E with weight lam (1 <= i <= N). Second
// component is the coefficient of z^{s_i lam}: the intertwining scalar
// whenever s_i lam != lam. Throws DegenerateEigenvalue when the eigenvalue
// ratio makes the correction term singular.
std::pair<LaurentPoly, FieldElem> intertwiner(const Ctx& c, int i, const LaurentPoly& E,
                                              const Weight& lam);

}  // namespace qkz::hecke

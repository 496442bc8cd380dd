#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qkz/polyz.hpp"

namespace qkz {

// Element of the fraction field Q(q, s, q0, qN, zeta0, zetaN, kappa0, kappaN,
// z1..z6, p, t), kept as a reduced fraction of integer polynomials:
// gcd(num, den) = 1 and the leading coefficient of den is positive. With that
// normalization the representation is unique, but equality is still decided by
// cross-multiplication so it can never depend on how hard the gcd worked.
class FieldElem {
public:
  FieldElem() : num_(), den_(1) {}
  FieldElem(long c) : num_(c), den_(1) {}
  FieldElem(const PolyZ& p) : num_(p), den_(1) {}
  FieldElem(PolyZ num, PolyZ den);
  static FieldElem variable(Var v, int exp = 1);  // exp may be negative
  static FieldElem from_int(long num, long den);
  // Precondition: gcd(num, den) == 1 and den != 0. Skips the reduction pass,
  // only normalizing the sign of the denominator.
  static FieldElem from_coprime(PolyZ num, PolyZ den);

  const PolyZ& num() const { return num_; }
  const PolyZ& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }

  FieldElem operator-() const;
  FieldElem operator+(const FieldElem& o) const;
  FieldElem operator-(const FieldElem& o) const;
  FieldElem operator*(const FieldElem& o) const;
  FieldElem operator/(const FieldElem& o) const;  // throws DivisionByZero
  FieldElem& operator+=(const FieldElem& o) { return *this = *this + o; }
  FieldElem& operator-=(const FieldElem& o) { return *this = *this - o; }
  FieldElem& operator*=(const FieldElem& o) { return *this = *this * o; }
  FieldElem& operator/=(const FieldElem& o) { return *this = *this / o; }
  FieldElem inverse() const;
  FieldElem pow(long n) const;  // negative n inverts

  bool operator==(const FieldElem& o) const;
  bool operator!=(const FieldElem& o) const { return !(*this == o); }

  bool uses(Var v) const { return num_.uses(v) || den_.uses(v); }
  std::vector<Var> variables() const;

  std::string num_string() const { return num_.to_string(); }
  std::string den_string() const { return den_.to_string(); }
  static FieldElem parse(std::string_view num, std::string_view den);

private:
  void reduce();
  PolyZ num_, den_;
};

// A parameter substitution: each listed variable is replaced by a field
// element; unlisted variables map to themselves. Application is simultaneous.
class Substitution {
public:
  Substitution() = default;
  Substitution& set(Var v, FieldElem image);
  bool maps(Var v) const { return images_.count(v) != 0; }
  const FieldElem& image(Var v) const;
  const std::map<Var, FieldElem>& images() const { return images_; }

  FieldElem apply(const PolyZ& p) const;
  // Throws SubstitutionPole if the denominator specializes to zero.
  FieldElem apply(const FieldElem& x) const;
  // Composition: (this ∘ other), i.e. apply `other` first.
  Substitution after(const Substitution& other) const;

private:
  std::map<Var, FieldElem> images_;
};

// The bar involution q -> 1/q, qN -> 1/qN, kappaN -> kappaN on the coefficient
// ring Z[q^{+-1}, qN^{+-1}, kappaN^{+-1}]. Any other variable present is an
// error: the involution is only defined on that subring.
FieldElem bar_involute(const FieldElem& x);

// Arithmetic in the quotient by p^2 + 1: the variable p acts as an imaginary
// unit, so every p-exponent folds to 0 or 1 with the matching sign flip.
PolyZ gaussian_reduce(const PolyZ& f);
// Zero / equality tests in that quotient. Denominators must stay nonzero
// after reduction; otherwise DivisionByZero.
bool gaussian_is_zero(const FieldElem& x);
bool gaussian_equal(const FieldElem& a, const FieldElem& b);

// Monte-Carlo zero test: evaluates at `trials` pseudo-random points modulo a
// 62-bit prime (deterministic for a fixed seed). Returns false as soon as a
// nonzero evaluation is seen. A `true` verdict is only evidence, never proof:
// callers must confirm with exact normalization. Throws SamplePole if it keeps
// hitting denominator zeros.
bool probabilistic_zero_check(const FieldElem& x, uint64_t seed, int trials = 4);

}  // namespace qkz

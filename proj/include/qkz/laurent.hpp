#pragma once

#include <qkz/field.hpp>
#include <qkz/weyl.hpp>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qkz::laurent {

using weyl::Weight;

// Sparse Laurent polynomial in z1..zn whose coefficients live in the
// parameter field (no z-variables inside a coefficient).
class LaurentPoly {
 public:
  explicit LaurentPoly(int n) : n_(check_n(n)) {}
  LaurentPoly(int n, const FieldElem& c);
  LaurentPoly(int n, long c) : LaurentPoly(n, FieldElem(c)) {}
  static LaurentPoly monomial(int n, const Weight& exp, const FieldElem& c);
  static LaurentPoly zpow(int n, int i, int e);  // z_i^e, 1-based i

  int n() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t num_terms() const { return terms_.size(); }
  const std::map<Weight, FieldElem>& terms() const { return terms_; }

  FieldElem extract(const Weight& exp) const;
  FieldElem constant_term() const { return extract(Weight(n_, 0)); }

  LaurentPoly operator-() const;
  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly& operator+=(const LaurentPoly& o) { return *this = *this + o; }
  LaurentPoly& operator-=(const LaurentPoly& o) { return *this = *this - o; }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
  LaurentPoly scaled(const FieldElem& c) const;
  bool operator==(const LaurentPoly& o) const;
  bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

  // i = 0: z1 -> s^2/z1 (coefficient picks up s^{2a}); 1 <= i <= n-1 swaps
  // z_i, z_{i+1}; i = n inverts z_n. The two-argument form takes the image of
  // s^2, so the reflection stays correct after parameter substitutions.
  LaurentPoly weyl_substitute(int i) const;
  LaurentPoly weyl_substitute(int i, const FieldElem& s_sq) const;

  // z_j -> c * z_k^e (k = 0 drops the z factor). 1-based indices.
  LaurentPoly subst_z(int j, const FieldElem& c, int k, int e) const;

  std::optional<LaurentPoly> divide(const LaurentPoly& d) const;
  LaurentPoly divexact(const LaurentPoly& d) const;  // throws NonPolynomialResult

  FieldElem to_field() const;
  // Fails with NonPolynomialResult when f has a genuine z-denominator.
  static LaurentPoly from_field(int n, const FieldElem& f);

  std::vector<Weight> maximal_exponents() const;  // antichain of the support
  // Unique maximal support exponent and its coefficient; AmbiguousLeading
  // when the maximum is not unique.
  std::pair<Weight, FieldElem> leading_term() const;

  std::string to_string() const;
  bool well_formed() const;

 private:
  static int check_n(int n);
  void insert(const Weight& exp, const FieldElem& c);  // accumulate, drop zeros
  int n_;
  std::map<Weight, FieldElem> terms_;
};

LaurentPoly operator*(const FieldElem& c, const LaurentPoly& f);

}  // namespace qkz::laurent

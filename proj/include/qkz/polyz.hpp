#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "qkz/error.hpp"

namespace qkz {

// The fixed variable universe. The declaration order *is* the monomial order's
// variable order, so it must never be reshuffled: q, s, q0, qN, zeta0, zetaN,
// kappa0, kappaN, z1..z6, p, t.
enum class Var : int {
  q = 0,
  s,
  q0,
  qN,
  zeta0,
  zetaN,
  kappa0,
  kappaN,
  z1,
  z2,
  z3,
  z4,
  z5,
  z6,
  p,
  t,
};

inline constexpr int kNumVars = 16;
inline constexpr int kMaxPositions = 6;  // z1..z6

const char* var_name(Var v);
std::optional<Var> var_from_name(std::string_view name);

// z-variable for position i (1-based).
inline Var zvar(int i) {
  if (i < 1 || i > kMaxPositions) fail(Errc::BadArgument, "position variable out of range");
  return static_cast<Var>(static_cast<int>(Var::z1) + (i - 1));
}

// Exponent vector of a monomial; always component-wise >= 0 inside PolyZ.
struct Mono {
  std::array<int16_t, kNumVars> e{};

  int operator[](Var v) const { return e[static_cast<int>(v)]; }
  int16_t& at(Var v) { return e[static_cast<int>(v)]; }
  long total_degree() const;
  bool is_unit() const;  // all exponents zero
  bool divides(const Mono& m) const;
  Mono operator*(const Mono& m) const;
  Mono operator/(const Mono& m) const;  // caller guarantees divisibility
  bool operator==(const Mono& m) const { return e == m.e; }

  // Graded lexicographic: higher total degree first; ties broken by the fixed
  // variable order, larger exponent first. Returns <0, 0, >0.
  static int cmp(const Mono& a, const Mono& b);
};

// Sparse multivariate polynomial over Z with arbitrary-precision coefficients.
// Terms are kept sorted in strictly descending monomial order with no zero
// coefficients, so structural equality is mathematical equality.
class PolyZ {
public:
  using Term = std::pair<Mono, mpz_class>;

  PolyZ() = default;
  PolyZ(long c);
  explicit PolyZ(const mpz_class& c);
  static PolyZ variable(Var v, int exp = 1);
  static PolyZ monomial(const Mono& m, const mpz_class& c);
  // Build from an unordered term list: sorts, merges duplicates, drops zeros.
  static PolyZ from_terms(std::vector<Term> terms);

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  bool is_constant() const;
  bool is_monomial() const { return terms_.size() == 1; }
  size_t num_terms() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }

  const Mono& leading_mono() const;
  const mpz_class& leading_coeff() const;
  const mpz_class& constant_coeff() const;  // coefficient of 1 (0 if absent)

  PolyZ operator-() const;
  PolyZ operator+(const PolyZ& o) const;
  PolyZ operator-(const PolyZ& o) const;
  PolyZ operator*(const PolyZ& o) const;
  PolyZ& operator+=(const PolyZ& o);
  PolyZ& operator-=(const PolyZ& o);
  PolyZ& operator*=(const PolyZ& o);
  bool operator==(const PolyZ& o) const { return terms_ == o.terms_; }
  bool operator!=(const PolyZ& o) const { return !(*this == o); }

  PolyZ mul_term(const Mono& m, const mpz_class& c) const;
  PolyZ pow(unsigned long n) const;

  // Exact division: nullopt if `o` does not divide exactly over Z.
  std::optional<PolyZ> divide(const PolyZ& o) const;
  PolyZ divexact(const PolyZ& o) const;  // throws NonPolynomialResult on failure

  int degree(Var v) const;   // -1 for the zero polynomial
  bool uses(Var v) const;
  std::vector<Var> variables() const;

  mpz_class int_content() const;                 // gcd of coefficients (>= 0)
  Mono mono_content() const;                     // componentwise min exponents
  mpz_class max_abs_coeff() const;

  // Substitute an integer for one variable (used by the heuristic gcd).
  PolyZ subst_int(Var v, const mpz_class& value) const;

  static PolyZ gcd(const PolyZ& a, const PolyZ& b);

  // Evaluate modulo a prime at a full point (one residue per variable).
  uint64_t eval_mod(const std::array<uint64_t, kNumVars>& point, uint64_t prime) const;

  std::string to_string() const;
  static PolyZ parse(std::string_view text);

  // Strict-descending-order invariant check (tests only; O(n)).
  bool well_formed() const;

private:
  static PolyZ from_sorted(std::vector<Term> terms);
  std::vector<Term> terms_;
  friend PolyZ gcd_prs(PolyZ a, PolyZ b);
};

}  // namespace qkz

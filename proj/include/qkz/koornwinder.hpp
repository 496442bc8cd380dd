#pragma once

#include <qkz/hecke.hpp>

#include <map>
#include <memory>
#include <utility>
#include <vector>

namespace qkz::koornwinder {

using laurent::LaurentPoly;
using weyl::Weight;

// Monic triangular simultaneous eigenfunction of the translation operators,
// kept at generic parameters together with its eigenvalue list.
struct KoornwinderPoly {
  Weight lambda;
  LaurentPoly poly;
  std::vector<FieldElem> eigenvalues;  // y(lambda)_i stored at [i-1]
};

enum class SpecCase { TwoBoundary, OneBoundary };

// Parameter locus descriptor. Two-boundary: (k, r') = (1, r+1), realized by
// s -> p^2, q -> branch * p^{-r}. One-boundary: (k, r') = (2, 2r+1), r = 1
// only: q -> -t^2, q_N -> t (which also enforces q_N^2 = -q) and
// s -> p * t^{-3} with p standing for an imaginary unit. The locus
// s^4 q^6 = 1 splits into the components q^3 s^2 = +1 and -1; the boundary
// vanishing identities live on the +1 component, which has no rational point
// over q = -t^2, so downstream zero tests on this case must reduce modulo
// p^2 + 1 (gaussian_is_zero / gaussian_equal).
struct SpecDescriptor {
  SpecCase kind = SpecCase::TwoBoundary;
  int r = 1;
  int branch = +1;
  bool qn_constraint = false;  // additionally force q_N^2 = -q

  std::pair<int, int> level() const;  // (k, r')
  Substitution substitution() const;
};

// How much certification a solve performs beyond its defining equations.
// Rows re-derives every translation-operator row of the result (default).
// Construction trusts the triangular elimination alone; callers choosing it
// are expected to certify the result externally, e.g. through
// check_intertwiner_step along a chain rooted at a Rows-certified solve.
enum class Certify { Rows, Construction };

class Engine;
namespace detail {
// Reference construction kept on the straightforward big-integer path; the
// test suite cross-checks the optimized solver against it.
KoornwinderPoly compute_E_reference(const Weight& lam);
}  // namespace detail

// Computes E_lambda by a triangular linear solve over the span of lower
// weights and certifies every eigen-equation afterwards. Columns of the
// translation operators on monomials are cached and shared across calls.
class Engine {
 public:
  explicit Engine(int N, bool reverse_ties = false);
  ~Engine();
  int n() const { return N_; }
  const hecke::Ctx& ctx() const { return ctx_; }
  const KoornwinderPoly& E(const Weight& lam);

  void set_certify(Certify mode) { certify_ = mode; }
  // Checks phi_i E_lam == c * E_{s_i lam} row by row, with c read off at the
  // leading weight of the target; requires s_i lam strictly below lam.
  // Returns the nonzero proportionality scalar; throws VerifyFailed on any
  // mismatching row and DegenerateEigenvalue where phi_i is singular.
  FieldElem check_intertwiner_step(int i, const Weight& lam);
  // Drops the cached results for one weight (both representations).
  void forget(const Weight& lam);

 private:
  struct SSol;  // solver-internal representation with factored denominators

  const LaurentPoly& column(int i, const Weight& nu);
  const LaurentPoly& tcolumn(int i, const Weight& nu);
  std::shared_ptr<const SSol> ssolve(const Weight& lam);
  KoornwinderPoly solve(const Weight& lam);
  KoornwinderPoly solve_reference(const Weight& lam);

  int N_;
  bool reverse_ties_;
  Certify certify_ = Certify::Rows;
  hecke::Ctx ctx_;
  std::map<Weight, KoornwinderPoly> memo_;
  std::map<Weight, std::shared_ptr<const SSol>> smemo_;
  std::map<std::pair<int, Weight>, LaurentPoly> cols_;
  std::map<std::pair<int, Weight>, LaurentPoly> tcols_;

  friend KoornwinderPoly detail::compute_E_reference(const Weight& lam);
};

KoornwinderPoly compute_E(const Weight& lam);

// Coefficientwise substitution; a vanishing denominator is reported as
// SpecializationPole, never skipped.
LaurentPoly specialize_E(const KoornwinderPoly& E, const SpecDescriptor& spec);
std::vector<FieldElem> specialize_eigenvalues(const KoornwinderPoly& E,
                                              const SpecDescriptor& spec);

// Index set of the span attached to mu at the given level: the admissible
// orbit elements connected to mu. Throws NotAdmissible when mu itself is not.
std::vector<Weight> build_span(const Weight& mu, const SpecDescriptor& spec);
// Restriction to weights with all entries >= 0.
std::vector<Weight> restrict_nonneg(const std::vector<Weight>& weights);

// Expand f over monic triangular polynomials keyed by their leading weight.
// Throws NotInSpan when a maximal support weight has no basis element.
std::map<Weight, FieldElem> expand_in_basis(const LaurentPoly& f,
                                            const std::map<Weight, LaurentPoly>& basis);

}  // namespace qkz::koornwinder

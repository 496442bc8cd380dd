#include "qkz/field.hpp"

#include <algorithm>

namespace qkz {

FieldElem::FieldElem(PolyZ num, PolyZ den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) fail(Errc::DivisionByZero, "field element with zero denominator");
  reduce();
}

FieldElem FieldElem::variable(Var v, int exp) {
  if (exp >= 0) return FieldElem(PolyZ::variable(v, exp));
  return FieldElem(PolyZ(1), PolyZ::variable(v, -exp));
}

FieldElem FieldElem::from_int(long num, long den) { return FieldElem(PolyZ(num), PolyZ(den)); }

FieldElem FieldElem::from_coprime(PolyZ num, PolyZ den) {
  if (den.is_zero()) fail(Errc::DivisionByZero, "field element with zero denominator");
  FieldElem f;
  if (num.is_zero()) return f;
  if (den.leading_coeff() < 0) {
    num = -num;
    den = -den;
  }
  f.num_ = std::move(num);
  f.den_ = std::move(den);
  return f;
}

void FieldElem::reduce() {
  if (num_.is_zero()) {
    den_ = PolyZ(1);
    return;
  }
  if (!den_.is_one()) {
    PolyZ g = PolyZ::gcd(num_, den_);
    if (!g.is_one()) {
      num_ = num_.divexact(g);
      den_ = den_.divexact(g);
    }
  }
  if (den_.leading_coeff() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
}

FieldElem FieldElem::operator-() const {
  FieldElem r(*this);
  r.num_ = -r.num_;
  return r;
}

FieldElem FieldElem::operator+(const FieldElem& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  if (den_ == o.den_) return FieldElem(num_ + o.num_, den_);
  PolyZ g = PolyZ::gcd(den_, o.den_);
  PolyZ da = den_.divexact(g), db = o.den_.divexact(g);
  return FieldElem(num_ * db + o.num_ * da, den_ * db);
}

FieldElem FieldElem::operator-(const FieldElem& o) const { return *this + (-o); }

FieldElem FieldElem::operator*(const FieldElem& o) const {
  if (is_zero() || o.is_zero()) return FieldElem();
  // Cross-reduce first: keeps the final gcd calls near-trivial.
  PolyZ g1 = PolyZ::gcd(num_, o.den_);
  PolyZ g2 = PolyZ::gcd(o.num_, den_);
  FieldElem r;
  r.num_ = num_.divexact(g1) * o.num_.divexact(g2);
  r.den_ = den_.divexact(g2) * o.den_.divexact(g1);
  if (r.den_.leading_coeff() < 0) {
    r.num_ = -r.num_;
    r.den_ = -r.den_;
  }
  return r;
}

FieldElem FieldElem::operator/(const FieldElem& o) const { return *this * o.inverse(); }

FieldElem FieldElem::inverse() const {
  if (is_zero()) fail(Errc::DivisionByZero, "inverse of zero field element");
  FieldElem r;
  r.num_ = den_;
  r.den_ = num_;
  if (r.den_.leading_coeff() < 0) {
    r.num_ = -r.num_;
    r.den_ = -r.den_;
  }
  return r;
}

FieldElem FieldElem::pow(long n) const {
  if (n == 0) return FieldElem(1);
  FieldElem base = n < 0 ? inverse() : *this;
  unsigned long e = static_cast<unsigned long>(n < 0 ? -n : n);
  FieldElem r;
  r.num_ = base.num_.pow(e);
  r.den_ = base.den_.pow(e);
  return r;  // powers of a reduced fraction stay reduced
}

bool FieldElem::operator==(const FieldElem& o) const {
  if (num_ == o.num_ && den_ == o.den_) return true;
  return num_ * o.den_ == o.num_ * den_;
}

std::vector<Var> FieldElem::variables() const {
  std::vector<Var> out;
  for (int i = 0; i < kNumVars; ++i)
    if (uses(static_cast<Var>(i))) out.push_back(static_cast<Var>(i));
  return out;
}

FieldElem FieldElem::parse(std::string_view num, std::string_view den) {
  return FieldElem(PolyZ::parse(num), PolyZ::parse(den));
}

Substitution& Substitution::set(Var v, FieldElem image) {
  images_[v] = std::move(image);
  return *this;
}

const FieldElem& Substitution::image(Var v) const {
  auto it = images_.find(v);
  if (it == images_.end()) fail(Errc::BadArgument, "substitution has no image for variable");
  return it->second;
}

FieldElem Substitution::apply(const PolyZ& p) const {
  // Fast path: nothing to replace.
  bool touched = false;
  for (const auto& kv : images_)
    if (p.uses(kv.first)) {
      touched = true;
      break;
    }
  if (!touched) return FieldElem(p);

  // Power tables per substituted variable, built lazily up to the degree seen.
  std::map<Var, std::vector<FieldElem>> powers;
  auto power_of = [&](Var v, int e) -> const FieldElem& {
    auto& tab = powers[v];
    if (tab.empty()) tab.push_back(FieldElem(1));
    while (static_cast<int>(tab.size()) <= e) tab.push_back(tab.back() * images_.at(v));
    return tab[e];
  };

  FieldElem acc;
  for (const auto& t : p.terms()) {
    Mono rest = t.first;
    FieldElem factor(PolyZ(t.second));
    for (const auto& kv : images_) {
      int e = rest[kv.first];
      if (e) {
        rest.at(kv.first) = 0;
        factor *= power_of(kv.first, e);
      }
    }
    acc += factor * FieldElem(PolyZ::monomial(rest, 1));
  }
  return acc;
}

FieldElem Substitution::apply(const FieldElem& x) const {
  FieldElem d = apply(x.den());
  if (d.is_zero()) fail(Errc::SubstitutionPole, "substitution sends denominator to zero");
  return apply(x.num()) / d;
}

Substitution Substitution::after(const Substitution& other) const {
  Substitution r;
  for (const auto& kv : other.images_) r.images_[kv.first] = apply(kv.second);
  for (const auto& kv : images_)
    if (!r.images_.count(kv.first)) r.images_[kv.first] = kv.second;
  return r;
}

FieldElem bar_involute(const FieldElem& x) {
  for (Var v : x.variables())
    if (v != Var::q && v != Var::qN && v != Var::kappaN)
      fail(Errc::UnsupportedVariable,
           std::string("bar involution undefined for variable ") + var_name(v));
  Substitution bar;
  bar.set(Var::q, FieldElem::variable(Var::q, -1));
  bar.set(Var::qN, FieldElem::variable(Var::qN, -1));
  return bar.apply(x);
}

PolyZ gaussian_reduce(const PolyZ& f) {
  std::vector<PolyZ::Term> ts;
  ts.reserve(f.num_terms());
  for (const auto& [m, c] : f.terms()) {
    const int k = m[Var::p];
    Mono r = m;
    r.at(Var::p) = static_cast<int16_t>(k % 2);
    ts.push_back({r, (k / 2) % 2 ? -c : c});
  }
  return PolyZ::from_terms(std::move(ts));
}

bool gaussian_is_zero(const FieldElem& x) {
  if (gaussian_reduce(x.den()).is_zero())
    fail(Errc::DivisionByZero, "denominator vanishes at p^2 = -1");
  return gaussian_reduce(x.num()).is_zero();
}

bool gaussian_equal(const FieldElem& a, const FieldElem& b) {
  if (gaussian_reduce(a.den()).is_zero() || gaussian_reduce(b.den()).is_zero())
    fail(Errc::DivisionByZero, "denominator vanishes at p^2 = -1");
  return gaussian_reduce(a.num() * b.den() - b.num() * a.den()).is_zero();
}

bool probabilistic_zero_check(const FieldElem& x, uint64_t seed, int trials) {
  if (x.is_zero()) return true;
  constexpr uint64_t kPrime = 0x3fffffffffffffdd;  // 62-bit prime
  uint64_t state = seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL;
  auto next = [&state] {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  };
  int pole_streak = 0;
  for (int t = 0; t < trials;) {
    std::array<uint64_t, kNumVars> point;
    for (auto& c : point) c = next() % (kPrime - 2) + 1;  // nonzero residues
    if (x.den().eval_mod(point, kPrime) == 0) {
      if (++pole_streak > 32) fail(Errc::SamplePole, "zero-test sampling keeps hitting poles");
      continue;
    }
    pole_streak = 0;
    if (x.num().eval_mod(point, kPrime) != 0) return false;
    ++t;
  }
  return true;
}

}  // namespace qkz

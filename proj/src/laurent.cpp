#include <qkz/laurent.hpp>

#include <algorithm>
#include <sstream>

namespace qkz::laurent {

namespace {

bool coeff_has_z(const FieldElem& c) {
  for (int i = 1; i <= kMaxPositions; ++i)
    if (c.uses(zvar(i))) return true;
  return false;
}

FieldElem fpow(const FieldElem& base, int e) {
  if (e == 0) return FieldElem(1);
  FieldElem b = e > 0 ? base : base.inverse();
  FieldElem r(1);
  for (int k = e > 0 ? e : -e; k > 0; k >>= 1) {
    if (k & 1) r = r * b;
    b = b * b;
  }
  return r;
}

// lex-descending order for the division loop (restricted to the shifted cone,
// where it is a genuine monomial well-order)
struct LexGt {
  bool operator()(const Weight& a, const Weight& b) const { return a > b; }
};

}  // namespace

int LaurentPoly::check_n(int n) {
  if (n < 1 || n > kMaxPositions) fail(Errc::BadArgument, "LaurentPoly: bad variable count");
  return n;
}

LaurentPoly::LaurentPoly(int n, const FieldElem& c) : n_(check_n(n)) {
  if (!c.is_zero()) insert(Weight(static_cast<std::size_t>(n), 0), c);
}

LaurentPoly LaurentPoly::monomial(int n, const Weight& exp, const FieldElem& c) {
  LaurentPoly f(n);
  if (static_cast<int>(exp.size()) != n) fail(Errc::BadArgument, "monomial: exponent length");
  if (coeff_has_z(c)) fail(Errc::BadArgument, "monomial: coefficient uses a position variable");
  if (!c.is_zero()) f.insert(exp, c);
  return f;
}

LaurentPoly LaurentPoly::zpow(int n, int i, int e) {
  Weight exp(static_cast<std::size_t>(check_n(n)), 0);
  if (i < 1 || i > n) fail(Errc::BadArgument, "zpow: index out of range");
  exp[i - 1] = e;
  return monomial(n, exp, FieldElem(1));
}

void LaurentPoly::insert(const Weight& exp, const FieldElem& c) {
  auto it = terms_.find(exp);
  if (it == terms_.end()) {
    if (!c.is_zero()) terms_.emplace(exp, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

FieldElem LaurentPoly::extract(const Weight& exp) const {
  auto it = terms_.find(exp);
  return it == terms_.end() ? FieldElem() : it->second;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly f(n_);
  for (const auto& [e, c] : terms_) f.terms_.emplace(e, -c);
  return f;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  if (n_ != o.n_) fail(Errc::BadArgument, "laurent add: variable count mismatch");
  LaurentPoly f = *this;
  for (const auto& [e, c] : o.terms_) f.insert(e, c);
  return f;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const { return *this + (-o); }

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  if (n_ != o.n_) fail(Errc::BadArgument, "laurent mul: variable count mismatch");
  LaurentPoly f(n_);
  Weight e(static_cast<std::size_t>(n_));
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_) {
      for (int i = 0; i < n_; ++i) e[i] = ea[i] + eb[i];
      f.insert(e, ca * cb);
    }
  return f;
}

LaurentPoly LaurentPoly::scaled(const FieldElem& c) const {
  if (coeff_has_z(c)) fail(Errc::BadArgument, "scaled: coefficient uses a position variable");
  LaurentPoly f(n_);
  if (c.is_zero()) return f;
  for (const auto& [e, k] : terms_) f.terms_.emplace(e, k * c);
  return f;
}

LaurentPoly operator*(const FieldElem& c, const LaurentPoly& f) { return f.scaled(c); }

bool LaurentPoly::operator==(const LaurentPoly& o) const {
  if (n_ != o.n_ || terms_.size() != o.terms_.size()) return false;
  auto it = o.terms_.begin();
  for (const auto& [e, c] : terms_) {
    if (e != it->first || !(c == it->second)) return false;
    ++it;
  }
  return true;
}

LaurentPoly LaurentPoly::weyl_substitute(int i) const {
  return weyl_substitute(i, FieldElem::variable(Var::s, 2));
}

LaurentPoly LaurentPoly::weyl_substitute(int i, const FieldElem& s_sq) const {
  if (i < 0 || i > n_) fail(Errc::BadArgument, "weyl_substitute: index out of range");
  LaurentPoly f(n_);
  Weight e(static_cast<std::size_t>(n_));
  for (const auto& [ea, ca] : terms_) {
    e = ea;
    FieldElem c = ca;
    if (i == 0) {
      c *= fpow(s_sq, ea[0]);
      e[0] = -ea[0];
    } else if (i == n_) {
      e[n_ - 1] = -ea[n_ - 1];
    } else {
      std::swap(e[i - 1], e[i]);
    }
    f.insert(e, c);
  }
  return f;
}

LaurentPoly LaurentPoly::subst_z(int j, const FieldElem& c, int k, int e) const {
  if (j < 1 || j > n_ || k < 0 || k > n_) fail(Errc::BadArgument, "subst_z: bad index");
  if (coeff_has_z(c)) fail(Errc::BadArgument, "subst_z: image uses a position variable");
  LaurentPoly f(n_);
  Weight ne(static_cast<std::size_t>(n_));
  for (const auto& [ea, ca] : terms_) {
    const int a = ea[j - 1];
    if (c.is_zero() && a < 0) fail(Errc::SubstitutionPole, "subst_z: pole at zero image");
    ne = ea;
    ne[j - 1] = 0;
    if (k > 0) ne[k - 1] += e * a;
    FieldElem nc = ca;
    if (a != 0) nc *= c.pow(a);  // c = 0 with a > 0 kills the term via nc = 0
    f.insert(ne, nc);
  }
  return f;
}

std::optional<LaurentPoly> LaurentPoly::divide(const LaurentPoly& d) const {
  if (n_ != d.n_) fail(Errc::BadArgument, "laurent divide: variable count mismatch");
  if (d.is_zero()) fail(Errc::DivisionByZero, "laurent divide by zero");
  LaurentPoly q(n_);
  if (is_zero()) return q;

  // shift both operands into the polynomial cone; per-variable minimal
  // exponents are additive, so the quotient shift is the difference
  Weight mn(static_cast<std::size_t>(n_), 0), md(static_cast<std::size_t>(n_), 0);
  auto mins = [this](const std::map<Weight, FieldElem>& t, Weight& m) {
    bool first = true;
    for (const auto& [e, c] : t) {
      for (int i = 0; i < n_; ++i) m[i] = first ? e[i] : std::min(m[i], e[i]);
      first = false;
    }
  };
  mins(terms_, mn);
  mins(d.terms_, md);

  std::map<Weight, FieldElem, LexGt> rem, den;
  Weight e(static_cast<std::size_t>(n_));
  for (const auto& [ea, c] : terms_) {
    for (int i = 0; i < n_; ++i) e[i] = ea[i] - mn[i];
    rem.emplace(e, c);
  }
  for (const auto& [ea, c] : d.terms_) {
    for (int i = 0; i < n_; ++i) e[i] = ea[i] - md[i];
    den.emplace(e, c);
  }

  const Weight& dlead = den.begin()->first;
  const FieldElem& dcoeff = den.begin()->second;
  while (!rem.empty()) {
    const Weight& rlead = rem.begin()->first;
    for (int i = 0; i < n_; ++i)
      if (rlead[i] < dlead[i]) return std::nullopt;
    Weight qe(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) qe[i] = rlead[i] - dlead[i];
    FieldElem qc = rem.begin()->second / dcoeff;
    for (const auto& [de, dc] : den) {
      for (int i = 0; i < n_; ++i) e[i] = qe[i] + de[i];
      auto it = rem.find(e);
      FieldElem nc = (it == rem.end() ? FieldElem() : it->second) - qc * dc;
      if (it != rem.end()) rem.erase(it);
      if (!nc.is_zero()) rem.emplace(e, nc);
    }
    for (int i = 0; i < n_; ++i) qe[i] += mn[i] - md[i];
    q.insert(qe, qc);
  }
  return q;
}

LaurentPoly LaurentPoly::divexact(const LaurentPoly& d) const {
  auto q = divide(d);
  if (!q) fail(Errc::NonPolynomialResult, "laurent division not exact");
  return *q;
}

FieldElem LaurentPoly::to_field() const {
  FieldElem acc;
  for (const auto& [e, c] : terms_) {
    FieldElem m = c;
    for (int i = 0; i < n_; ++i)
      if (e[i] != 0) m *= FieldElem::variable(zvar(i + 1), e[i]);
    acc += m;
  }
  return acc;
}

LaurentPoly LaurentPoly::from_field(int n, const FieldElem& f) {
  check_n(n);
  for (int i = n + 1; i <= kMaxPositions; ++i)
    if (f.uses(zvar(i))) fail(Errc::BadArgument, "from_field: position variable beyond n");
  LaurentPoly out(n);
  if (f.is_zero()) return out;

  auto zpart = [n](const Mono& m) {
    Weight e(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) e[i] = m[zvar(i + 1)];
    return e;
  };
  auto strip_z = [n](const Mono& m) {
    Mono r = m;
    for (int i = 0; i < n; ++i) r.at(zvar(i + 1)) = 0;
    return r;
  };

  // the reduced denominator must be (z-free) * (z-monomial)
  const PolyZ& den = f.den();
  Weight dz = zpart(den.terms().front().first);
  PolyZ dfree;
  for (const auto& [m, c] : den.terms()) {
    if (zpart(m) != dz) fail(Errc::NonPolynomialResult, "from_field: z-dependent denominator");
    dfree += PolyZ::monomial(strip_z(m), c);
  }

  std::map<Weight, PolyZ> groups;
  for (const auto& [m, c] : f.num().terms()) groups[zpart(m)] += PolyZ::monomial(strip_z(m), c);
  for (auto& [e, p] : groups) {
    Weight ne = e;
    for (int i = 0; i < n; ++i) ne[i] -= dz[i];
    out.insert(ne, FieldElem(p, dfree));
  }
  return out;
}

std::vector<Weight> LaurentPoly::maximal_exponents() const {
  std::vector<Weight> out;
  for (const auto& [e, c] : terms_) {
    bool maximal = true;
    for (const auto& [e2, c2] : terms_)
      if (weyl::compare(e2, e) == weyl::Cmp::Greater) {
        maximal = false;
        break;
      }
    if (maximal) out.push_back(e);
  }
  return out;
}

std::pair<Weight, FieldElem> LaurentPoly::leading_term() const {
  if (is_zero()) fail(Errc::BadArgument, "leading_term of zero");
  auto mx = maximal_exponents();
  if (mx.size() != 1) fail(Errc::AmbiguousLeading, "leading exponent not unique");
  return {mx.front(), extract(mx.front())};
}

std::string LaurentPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.num_string();
    if (!c.is_polynomial()) os << ")/(" << c.den_string();
    os << ")";
    for (int i = 0; i < n_; ++i)
      if (e[i] != 0) {
        os << "*z" << i + 1;
        if (e[i] != 1) os << "^" << e[i];
      }
  }
  return os.str();
}

bool LaurentPoly::well_formed() const {
  for (const auto& [e, c] : terms_) {
    if (static_cast<int>(e.size()) != n_) return false;
    if (c.is_zero()) return false;
    if (coeff_has_z(c)) return false;
  }
  return true;
}

}  // namespace qkz::laurent

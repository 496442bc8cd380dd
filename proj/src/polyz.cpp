#include "qkz/polyz.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace qkz {

namespace {

const char* kVarNames[kNumVars] = {"q",      "s",      "q0", "qN", "zeta0", "zetaN",
                                   "kappa0", "kappaN", "z1", "z2", "z3",    "z4",
                                   "z5",     "z6",     "p",  "t"};

// Descending monomial order for map-based accumulation.
struct MonoGt {
  bool operator()(const Mono& a, const Mono& b) const { return Mono::cmp(a, b) > 0; }
};

mpz_class zgcd(const mpz_class& a, const mpz_class& b) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// Symmetric remainder in (-m/2, m/2].
mpz_class smod(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  if (r * 2 > m) r -= m;
  return r;
}

}  // namespace

const char* var_name(Var v) { return kVarNames[static_cast<int>(v)]; }

std::optional<Var> var_from_name(std::string_view name) {
  for (int i = 0; i < kNumVars; ++i)
    if (name == kVarNames[i]) return static_cast<Var>(i);
  return std::nullopt;
}

long Mono::total_degree() const {
  long d = 0;
  for (int16_t x : e) d += x;
  return d;
}

bool Mono::is_unit() const {
  for (int16_t x : e)
    if (x) return false;
  return true;
}

bool Mono::divides(const Mono& m) const {
  for (int i = 0; i < kNumVars; ++i)
    if (e[i] > m.e[i]) return false;
  return true;
}

Mono Mono::operator*(const Mono& m) const {
  Mono r;
  for (int i = 0; i < kNumVars; ++i) r.e[i] = static_cast<int16_t>(e[i] + m.e[i]);
  return r;
}

Mono Mono::operator/(const Mono& m) const {
  Mono r;
  for (int i = 0; i < kNumVars; ++i) r.e[i] = static_cast<int16_t>(e[i] - m.e[i]);
  return r;
}

int Mono::cmp(const Mono& a, const Mono& b) {
  // Single fused pass: degree difference plus first lexicographic deviation.
  long dd = 0;
  int first = -1;
  for (int i = 0; i < kNumVars; ++i) {
    dd += a.e[i] - b.e[i];
    if (first < 0 && a.e[i] != b.e[i]) first = i;
  }
  if (dd != 0) return dd < 0 ? -1 : 1;
  if (first < 0) return 0;
  return a.e[first] < b.e[first] ? -1 : 1;
}

PolyZ::PolyZ(long c) {
  if (c != 0) terms_.push_back({Mono{}, mpz_class(c)});
}

PolyZ::PolyZ(const mpz_class& c) {
  if (c != 0) terms_.push_back({Mono{}, c});
}

PolyZ PolyZ::variable(Var v, int exp) {
  if (exp < 0) fail(Errc::BadArgument, "negative exponent in PolyZ::variable");
  Mono m;
  m.at(v) = static_cast<int16_t>(exp);
  return monomial(m, 1);
}

PolyZ PolyZ::monomial(const Mono& m, const mpz_class& c) {
  PolyZ p;
  if (c != 0) p.terms_.push_back({m, c});
  return p;
}

bool PolyZ::is_one() const {
  return terms_.size() == 1 && terms_[0].first.is_unit() && terms_[0].second == 1;
}

bool PolyZ::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_unit());
}

const Mono& PolyZ::leading_mono() const {
  if (is_zero()) fail(Errc::BadArgument, "leading_mono of zero polynomial");
  return terms_.front().first;
}

const mpz_class& PolyZ::leading_coeff() const {
  if (is_zero()) fail(Errc::BadArgument, "leading_coeff of zero polynomial");
  return terms_.front().second;
}

const mpz_class& PolyZ::constant_coeff() const {
  static const mpz_class zero(0);
  if (!terms_.empty() && terms_.back().first.is_unit()) return terms_.back().second;
  return zero;
}

PolyZ PolyZ::from_sorted(std::vector<Term> terms) {
  PolyZ p;
  p.terms_ = std::move(terms);
  return p;
}

PolyZ PolyZ::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return MonoGt{}(a.first, b.first); });
  std::vector<Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && Mono::cmp(out.back().first, t.first) == 0) {
      out.back().second += t.second;
    } else {
      if (!out.empty() && out.back().second == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().second == 0) out.pop_back();
  return from_sorted(std::move(out));
}

PolyZ PolyZ::operator-() const {
  PolyZ r(*this);
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

PolyZ PolyZ::operator+(const PolyZ& o) const {
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  size_t i = 0, j = 0;
  while (i < terms_.size() && j < o.terms_.size()) {
    int c = Mono::cmp(terms_[i].first, o.terms_[j].first);
    if (c > 0) {
      out.push_back(terms_[i++]);
    } else if (c < 0) {
      out.push_back(o.terms_[j++]);
    } else {
      mpz_class sum = terms_[i].second + o.terms_[j].second;
      if (sum != 0) out.push_back({terms_[i].first, sum});
      ++i, ++j;
    }
  }
  for (; i < terms_.size(); ++i) out.push_back(terms_[i]);
  for (; j < o.terms_.size(); ++j) out.push_back(o.terms_[j]);
  return from_sorted(std::move(out));
}

PolyZ PolyZ::operator-(const PolyZ& o) const { return *this + (-o); }

namespace {

// Merge two strictly-descending term runs, summing equal monomials.
std::vector<PolyZ::Term> merge_runs(std::vector<PolyZ::Term>&& x,
                                    std::vector<PolyZ::Term>&& y) {
  std::vector<PolyZ::Term> out;
  out.reserve(x.size() + y.size());
  size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    int c = Mono::cmp(x[i].first, y[j].first);
    if (c > 0) {
      out.push_back(std::move(x[i++]));
    } else if (c < 0) {
      out.push_back(std::move(y[j++]));
    } else {
      x[i].second += y[j].second;
      if (x[i].second != 0) out.push_back(std::move(x[i]));
      ++i, ++j;
    }
  }
  for (; i < x.size(); ++i) out.push_back(std::move(x[i]));
  for (; j < y.size(); ++j) out.push_back(std::move(y[j]));
  return out;
}

}  // namespace

PolyZ PolyZ::operator*(const PolyZ& o) const {
  if (is_zero() || o.is_zero()) return PolyZ();
  if (is_monomial()) return o.mul_term(terms_[0].first, terms_[0].second);
  if (o.is_monomial()) return mul_term(o.terms_[0].first, o.terms_[0].second);
  // One presorted run per term of the smaller factor, then a balanced
  // bottom-up merge; avoids any tree/sort on the product terms.
  const PolyZ& small = terms_.size() <= o.terms_.size() ? *this : o;
  const PolyZ& big = terms_.size() <= o.terms_.size() ? o : *this;
  std::vector<std::vector<Term>> runs;
  runs.reserve(small.terms_.size());
  for (const auto& [m, c] : small.terms_) {
    std::vector<Term> run;
    run.reserve(big.terms_.size());
    for (const auto& t : big.terms_) run.push_back({t.first * m, t.second * c});
    runs.push_back(std::move(run));
  }
  while (runs.size() > 1) {
    std::vector<std::vector<Term>> next;
    next.reserve((runs.size() + 1) / 2);
    for (size_t k = 0; k + 1 < runs.size(); k += 2)
      next.push_back(merge_runs(std::move(runs[k]), std::move(runs[k + 1])));
    if (runs.size() % 2) next.push_back(std::move(runs.back()));
    runs = std::move(next);
  }
  return from_sorted(std::move(runs.front()));
}

PolyZ& PolyZ::operator+=(const PolyZ& o) { return *this = *this + o; }
PolyZ& PolyZ::operator-=(const PolyZ& o) { return *this = *this - o; }
PolyZ& PolyZ::operator*=(const PolyZ& o) { return *this = *this * o; }

PolyZ PolyZ::mul_term(const Mono& m, const mpz_class& c) const {
  if (c == 0) return PolyZ();
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({t.first * m, t.second * c});
  return from_sorted(std::move(out));
}

PolyZ PolyZ::pow(unsigned long n) const {
  PolyZ r(1), base(*this);
  while (n) {
    if (n & 1) r *= base;
    base = (n >>= 1) ? base * base : base;
  }
  return r;
}

std::optional<PolyZ> PolyZ::divide(const PolyZ& o) const {
  if (o.is_zero()) fail(Errc::DivisionByZero, "polynomial division by zero");
  if (is_zero()) return PolyZ();
  if (o.is_one()) return *this;
  // Sparse division generating the remainder's leading terms on the fly: the
  // dividend stream merges with one lazy stream q·tail_j per divisor tail
  // term, each of which is itself strictly descending because the quotient is
  // produced in descending order. No intermediate remainder is materialized.
  const Mono& lmo = o.leading_mono();
  const mpz_class& lco = o.leading_coeff();
  const size_t k = o.terms_.size();
  std::vector<Term> quot;
  size_t fi = 0;
  std::vector<size_t> ptr(k, 0);  // stream j consumes quot[ptr[j]] * o.terms_[j]
  std::vector<char> live(k, 0);
  mpz_class c, qc, r;
  while (true) {
    bool have = false;
    Mono m;
    if (fi < terms_.size()) {
      m = terms_[fi].first;
      have = true;
    }
    for (size_t j = 1; j < k; ++j) {
      if (!live[j]) continue;
      Mono mj = quot[ptr[j]].first * o.terms_[j].first;
      if (!have || Mono::cmp(mj, m) > 0) {
        m = mj;
        have = true;
      }
    }
    if (!have) break;  // remainder exhausted: division was exact
    c = 0;
    if (fi < terms_.size() && Mono::cmp(terms_[fi].first, m) == 0) {
      c += terms_[fi].second;
      ++fi;
    }
    for (size_t j = 1; j < k; ++j) {
      if (!live[j]) continue;
      if (Mono::cmp(quot[ptr[j]].first * o.terms_[j].first, m) != 0) continue;
      mpz_submul(c.get_mpz_t(), quot[ptr[j]].second.get_mpz_t(),
                 o.terms_[j].second.get_mpz_t());
      if (++ptr[j] >= quot.size()) live[j] = 0;
    }
    if (c == 0) continue;
    if (!lmo.divides(m)) return std::nullopt;
    mpz_tdiv_qr(qc.get_mpz_t(), r.get_mpz_t(), c.get_mpz_t(), lco.get_mpz_t());
    if (r != 0) return std::nullopt;
    quot.push_back({m / lmo, qc});
    for (size_t j = 1; j < k; ++j)
      if (!live[j] && ptr[j] + 1 == quot.size()) live[j] = 1;
  }
  return from_sorted(std::move(quot));
}

PolyZ PolyZ::divexact(const PolyZ& o) const {
  auto q = divide(o);
  if (!q) fail(Errc::NonPolynomialResult, "exact polynomial division left a remainder");
  return *q;
}

int PolyZ::degree(Var v) const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, static_cast<int>(t.first[v]));
  return d;
}

bool PolyZ::uses(Var v) const {
  for (const auto& t : terms_)
    if (t.first[v]) return true;
  return false;
}

std::vector<Var> PolyZ::variables() const {
  std::vector<Var> out;
  for (int i = 0; i < kNumVars; ++i)
    if (uses(static_cast<Var>(i))) out.push_back(static_cast<Var>(i));
  return out;
}

mpz_class PolyZ::int_content() const {
  mpz_class g = 0;
  for (const auto& t : terms_) {
    g = zgcd(g, t.second);
    if (g == 1) break;
  }
  return g;
}

Mono PolyZ::mono_content() const {
  if (is_zero()) return Mono{};
  Mono m = terms_[0].first;
  for (const auto& t : terms_)
    for (int i = 0; i < kNumVars; ++i) m.e[i] = std::min(m.e[i], t.first.e[i]);
  return m;
}

mpz_class PolyZ::max_abs_coeff() const {
  mpz_class m = 0;
  for (const auto& t : terms_) {
    mpz_class a = abs(t.second);
    if (a > m) m = a;
  }
  return m;
}

PolyZ PolyZ::subst_int(Var v, const mpz_class& value) const {
  // Horner over the v-degree strata.
  std::map<int, std::vector<Term>> bucket;
  for (const auto& t : terms_) {
    Mono m = t.first;
    int d = m[v];
    m.at(v) = 0;
    bucket[d].push_back({m, t.second});
  }
  std::map<int, PolyZ> strata;
  for (auto& kv : bucket) strata[kv.first] = from_terms(std::move(kv.second));
  PolyZ r;
  int prev = -1;
  for (auto it = strata.rbegin(); it != strata.rend(); ++it) {
    if (prev >= 0) {
      mpz_class scale;
      mpz_pow_ui(scale.get_mpz_t(), value.get_mpz_t(), static_cast<unsigned long>(prev - it->first));
      r = r * PolyZ(scale);
    }
    r += it->second;
    prev = it->first;
  }
  if (prev > 0) {
    mpz_class scale;
    mpz_pow_ui(scale.get_mpz_t(), value.get_mpz_t(), static_cast<unsigned long>(prev));
    r = r * PolyZ(scale);
  }
  return r;
}

// ---------------------------------------------------------------------------
// GCD machinery: trivial cases, heuristic integer-evaluation gcd with an exact
// division check, and a primitive pseudo-remainder sequence as the fallback.

namespace {

// Univariate-in-v view with polynomial coefficients.
std::map<int, PolyZ> to_recursive(const PolyZ& a, Var v) {
  std::map<int, std::vector<PolyZ::Term>> bucket;
  for (const auto& t : a.terms()) {
    Mono m = t.first;
    int d = m[v];
    m.at(v) = 0;
    bucket[d].push_back({m, t.second});
  }
  std::map<int, PolyZ> r;
  for (auto& kv : bucket) r[kv.first] = PolyZ::from_terms(std::move(kv.second));
  return r;
}

PolyZ from_recursive(const std::map<int, PolyZ>& strata, Var v) {
  PolyZ r;
  for (const auto& kv : strata) r += kv.second * PolyZ::variable(v, kv.first);
  return r;
}

PolyZ content_wrt(const PolyZ& a, Var v) {
  PolyZ c;
  for (const auto& kv : to_recursive(a, v)) {
    c = c.is_zero() ? kv.second : PolyZ::gcd(c, kv.second);
    if (c.is_one()) break;
  }
  return c;
}

std::optional<PolyZ> gcd_heuristic(const PolyZ& a, const PolyZ& b, int depth);

PolyZ gcd_dispatch(const PolyZ& a, const PolyZ& b);

}  // namespace

PolyZ gcd_prs(PolyZ a, PolyZ b) {
  // Pick the main variable shared by both with the smallest min-degree.
  Var v = Var::q;
  int best = -1;
  for (int i = 0; i < kNumVars; ++i) {
    Var w = static_cast<Var>(i);
    int da = a.degree(w), db = b.degree(w);
    if (da > 0 && db > 0) {
      int score = std::min(da, db);
      if (best < 0 || score < best) {
        best = score;
        v = w;
      }
    }
  }
  if (best < 0) {
    // No shared variable: the gcd is the gcd of the contents, and the
    // polynomial parts are coprime. Integer contents were already stripped.
    return PolyZ(1);
  }

  PolyZ ca = content_wrt(a, v), cb = content_wrt(b, v);
  PolyZ c = PolyZ::gcd(ca, cb);
  PolyZ pa = a.divexact(ca), pb = b.divexact(cb);

  auto ra = to_recursive(pa, v), rb = to_recursive(pb, v);
  if (ra.rbegin()->first < rb.rbegin()->first) std::swap(ra, rb);

  while (true) {
    int db = rb.rbegin()->first;
    // Pseudo-remainder of ra by rb in v: multiply through by the leading
    // coefficient at every step so no coefficient division is ever needed.
    PolyZ lcb = rb.rbegin()->second;
    std::map<int, PolyZ> r = ra;
    while (!r.empty() && r.rbegin()->first >= db) {
      int d = r.rbegin()->first;
      PolyZ lead = r.rbegin()->second;
      r.erase(d);
      for (auto& kv : r) kv.second *= lcb;
      for (const auto& kv : rb) {
        if (kv.first == db) continue;
        PolyZ& slot = r[kv.first + d - db];
        slot -= lead * kv.second;
        if (slot.is_zero()) r.erase(kv.first + d - db);
      }
    }
    if (r.empty()) {
      PolyZ prim = from_recursive(rb, v);
      prim = prim.divexact(content_wrt(prim, v));
      PolyZ g = c * prim;
      mpz_class ic = g.int_content();
      if (ic != 0 && ic != 1) g = g.divexact(PolyZ(ic));
      if (!g.is_zero() && g.leading_coeff() < 0) g = -g;
      return g;
    }
    if (r.rbegin()->first == 0) return c;  // coprime primitive parts
    PolyZ rem = from_recursive(r, v);
    mpz_class ic = rem.int_content();
    if (ic != 1) rem = rem.divexact(PolyZ(ic));
    rem = rem.divexact(content_wrt(rem, v));
    ra = rb;
    rb = to_recursive(rem, v);
  }
}

namespace {

std::optional<PolyZ> gcd_heuristic(const PolyZ& a, const PolyZ& b, int depth) {
  if (depth > 24) return std::nullopt;
  if (a.is_constant() && b.is_constant()) {
    return PolyZ(zgcd(a.is_zero() ? mpz_class(0) : a.leading_coeff(),
                      b.is_zero() ? mpz_class(0) : b.leading_coeff()));
  }
  Var v = Var::q;
  bool found = false;
  for (int i = 0; i < kNumVars && !found; ++i)
    if (a.uses(static_cast<Var>(i)) || b.uses(static_cast<Var>(i))) {
      v = static_cast<Var>(i);
      found = true;
    }
  mpz_class na = a.max_abs_coeff(), nb = b.max_abs_coeff();
  mpz_class xi = 2 * std::min(na, nb) + 2;
  int dv = std::max(a.degree(v), 0) + std::max(b.degree(v), 0) + 1;
  for (int attempt = 0; attempt < 6; ++attempt) {
    PolyZ av = a.subst_int(v, xi), bv = b.subst_int(v, xi);
    auto gi = gcd_heuristic(av, bv, depth + 1);
    if (gi) {
      // v-adic reconstruction with symmetric digits.
      PolyZ img = *gi;
      std::vector<PolyZ::Term> gterms;
      int i = 0;
      bool ok = true;
      while (!img.is_zero()) {
        if (i > dv) {
          ok = false;
          break;
        }
        std::vector<PolyZ::Term> dig;
        for (const auto& t : img.terms()) {
          mpz_class d = smod(t.second, xi);
          if (d != 0) dig.push_back({t.first, d});
        }
        PolyZ digit = PolyZ::from_terms(dig);
        Mono vm;
        vm.at(v) = static_cast<int16_t>(i);
        for (auto& t : dig) gterms.push_back({t.first * vm, std::move(t.second)});
        img = (img - digit).divexact(PolyZ(xi));
        ++i;
      }
      PolyZ g = PolyZ::from_terms(std::move(gterms));
      if (ok && !g.is_zero()) {
        mpz_class ic = g.int_content();
        if (ic != 1) g = g.divexact(PolyZ(ic));
        if (a.divide(g).has_value() && b.divide(g).has_value()) {
          if (g.leading_coeff() < 0) g = -g;
          return g;
        }
      }
    }
    xi = xi * 73794 / 27011 + 17;  // deterministic growth, same spirit as GiNaC
  }
  return std::nullopt;
}

PolyZ gcd_dispatch(const PolyZ& a, const PolyZ& b) {
  auto h = gcd_heuristic(a, b, 0);
  if (h) return *h;
  return gcd_prs(a, b);
}

}  // namespace

PolyZ PolyZ::gcd(const PolyZ& a, const PolyZ& b) {
  if (a.is_zero()) {
    PolyZ g = b;
    if (!g.is_zero() && g.leading_coeff() < 0) g = -g;
    return g;
  }
  if (b.is_zero()) {
    PolyZ g = a;
    if (!g.is_zero() && g.leading_coeff() < 0) g = -g;
    return g;
  }
  mpz_class ia = a.int_content(), ib = b.int_content();
  Mono ma = a.mono_content(), mb = b.mono_content();
  Mono mg;
  for (int i = 0; i < kNumVars; ++i) mg.e[i] = std::min(ma.e[i], mb.e[i]);
  mpz_class ig = zgcd(ia, ib);

  PolyZ pa = a.divexact(monomial(ma, ia));
  PolyZ pb = b.divexact(monomial(mb, ib));
  PolyZ shared = monomial(mg, ig);
  if (pa.is_constant() || pb.is_constant()) return shared;  // primitive constants are 1
  if (pa == pb) return shared * pa;
  // One side dividing the other is common when reducing fractions.
  if (pa.num_terms() <= pb.num_terms() && pb.divide(pa).has_value()) return shared * pa;
  if (pb.num_terms() < pa.num_terms() && pa.divide(pb).has_value()) return shared * pb;
  return shared * gcd_dispatch(pa, pb);
}

uint64_t PolyZ::eval_mod(const std::array<uint64_t, kNumVars>& point, uint64_t prime) const {
  auto mulmod = [prime](uint64_t x, uint64_t y) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(x) * y) % prime);
  };
  auto powmod = [&](uint64_t base, unsigned exp) {
    uint64_t r = 1 % prime;
    base %= prime;
    while (exp) {
      if (exp & 1) r = mulmod(r, base);
      base = mulmod(base, base);
      exp >>= 1;
    }
    return r;
  };
  uint64_t acc = 0;
  mpz_class pz(static_cast<unsigned long>(prime));
  for (const auto& t : terms_) {
    mpz_class cm;
    mpz_fdiv_r(cm.get_mpz_t(), t.second.get_mpz_t(), pz.get_mpz_t());
    uint64_t val = mpz_get_ui(cm.get_mpz_t());
    for (int i = 0; i < kNumVars; ++i)
      if (t.first.e[i]) val = mulmod(val, powmod(point[i], static_cast<unsigned>(t.first.e[i])));
    acc = (acc + val) % prime;
  }
  return acc;
}

std::string PolyZ::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    mpz_class c = t.second;
    bool neg = c < 0;
    if (first) {
      if (neg) os << "-";
      first = false;
    } else {
      os << (neg ? " - " : " + ");
    }
    if (neg) c = -c;
    std::string mono;
    for (int i = 0; i < kNumVars; ++i) {
      if (!t.first.e[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += kVarNames[i];
      if (t.first.e[i] != 1) mono += "^" + std::to_string(t.first.e[i]);
    }
    if (mono.empty()) {
      os << c.get_str();
    } else {
      if (c != 1) os << c.get_str() << "*";
      os << mono;
    }
  }
  return os.str();
}

PolyZ PolyZ::parse(std::string_view text) {
  size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto parse_factor = [&]() -> PolyZ {
    skip_ws();
    if (pos >= text.size()) fail(Errc::ParseError, "unexpected end of polynomial text");
    if (std::isdigit(static_cast<unsigned char>(text[pos]))) {
      size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      return PolyZ(mpz_class(std::string(text.substr(start, pos - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(text[pos]))) {
      size_t start = pos;
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
        ++pos;
      auto v = var_from_name(text.substr(start, pos - start));
      if (!v) fail(Errc::ParseError, "unknown variable '" + std::string(text.substr(start, pos - start)) + "'");
      int exp = 1;
      skip_ws();
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        skip_ws();
        size_t estart = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (estart == pos) fail(Errc::ParseError, "missing exponent after '^'");
        exp = std::stoi(std::string(text.substr(estart, pos - estart)));
      }
      return variable(*v, exp);
    }
    fail(Errc::ParseError, std::string("unexpected character '") + text[pos] + "' in polynomial");
  };

  PolyZ result;
  skip_ws();
  bool expecting_term = true;
  int sign = 1;
  while (pos < text.size()) {
    skip_ws();
    if (pos >= text.size()) break;
    char c = text[pos];
    if (c == '+' || c == '-') {
      if (expecting_term && c == '-') {
        sign = -sign;
        ++pos;
        continue;
      }
      if (expecting_term) {
        ++pos;
        continue;
      }
      sign = (c == '-') ? -1 : 1;
      ++pos;
      expecting_term = true;
      continue;
    }
    PolyZ term = parse_factor();
    skip_ws();
    while (pos < text.size() && text[pos] == '*') {
      ++pos;
      term *= parse_factor();
      skip_ws();
    }
    result += (sign < 0) ? -term : term;
    sign = 1;
    expecting_term = false;
  }
  if (expecting_term && !result.is_zero()) fail(Errc::ParseError, "dangling sign in polynomial");
  return result;
}

bool PolyZ::well_formed() const {
  for (size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].second == 0) return false;
    for (int j = 0; j < kNumVars; ++j)
      if (terms_[i].first.e[j] < 0) return false;
    if (i + 1 < terms_.size() && Mono::cmp(terms_[i].first, terms_[i + 1].first) <= 0) return false;
  }
  return true;
}

}  // namespace qkz

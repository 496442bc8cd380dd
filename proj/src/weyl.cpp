#include <qkz/weyl.hpp>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <queue>
#include <set>

namespace qkz::weyl {

Weight act(int i, const Weight& v) {
  const int N = static_cast<int>(v.size());
  if (N == 0 || i < 0 || i > N) fail(Errc::BadArgument, "act: index out of range");
  Weight w = v;
  if (i == 0)
    w[0] = -1 - w[0];
  else if (i == N)
    w[N - 1] = -w[N - 1];
  else
    std::swap(w[i - 1], w[i]);
  return w;
}

Weight dominant(const Weight& v) {
  Weight w = v;
  for (int& x : w) x = std::abs(x);
  std::sort(w.begin(), w.end(), std::greater<int>());
  return w;
}

Weight rho(int N) {
  Weight r(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) r[i] = N - 1 - i;
  return r;
}

bool dominance_leq(const Weight& a, const Weight& b) {
  if (a.size() != b.size()) fail(Errc::BadArgument, "dominance_leq: length mismatch");
  long sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += b[i] - a[i];
    if (sum < 0) return false;
  }
  return true;
}

Cmp compare(const Weight& a, const Weight& b) {
  if (a.size() != b.size()) fail(Errc::BadArgument, "compare: length mismatch");
  if (a == b) return Cmp::Equal;
  const Weight ap = dominant(a), bp = dominant(b);
  if (ap != bp) {
    if (dominance_leq(bp, ap)) return Cmp::Greater;
    if (dominance_leq(ap, bp)) return Cmp::Less;
    return Cmp::Incomparable;
  }
  if (dominance_leq(b, a)) return Cmp::Greater;
  if (dominance_leq(a, b)) return Cmp::Less;
  return Cmp::Incomparable;
}

namespace {

// Finite Weyl generators only (1..N).
Weight fin_act(int i, const Weight& v) { return act(i, v); }

}  // namespace

WeightData weight_data(const Weight& lam) {
  const int N = static_cast<int>(lam.size());
  if (N == 0) fail(Errc::BadArgument, "weight_data: empty weight");
  WeightData out;
  out.lambda = lam;
  out.lambda_plus = dominant(lam);
  out.sigma.resize(lam.size());
  for (std::size_t i = 0; i < lam.size(); ++i) out.sigma[i] = sign_of(lam[i]);

  struct Node {
    Weight w, rimg;
    std::vector<int> word;
  };
  std::queue<Node> bfs;
  std::set<Weight> seen;
  bfs.push({out.lambda_plus, rho(N), {}});
  seen.insert(out.lambda_plus);
  while (!bfs.empty()) {
    Node cur = std::move(bfs.front());
    bfs.pop();
    if (cur.w == lam) {
      out.word = std::move(cur.word);
      out.rho_image = std::move(cur.rimg);
      return out;
    }
    for (int g = 1; g <= N; ++g) {
      Weight nw = fin_act(g, cur.w);
      if (seen.insert(nw).second) {
        std::vector<int> word;
        word.reserve(cur.word.size() + 1);
        word.push_back(g);
        word.insert(word.end(), cur.word.begin(), cur.word.end());
        bfs.push({std::move(nw), fin_act(g, cur.rimg), std::move(word)});
      }
    }
  }
  fail(Errc::BadArgument, "weight_data: weight not in orbit of its dominant");
}

std::vector<Weight> orbit(const Weight& lam) {
  const int N = static_cast<int>(lam.size());
  std::set<Weight> seen;
  std::queue<Weight> bfs;
  Weight start = dominant(lam);
  seen.insert(start);
  bfs.push(start);
  while (!bfs.empty()) {
    Weight cur = std::move(bfs.front());
    bfs.pop();
    for (int g = 1; g <= N; ++g) {
      Weight nw = fin_act(g, cur);
      if (seen.insert(nw).second) bfs.push(nw);
    }
  }
  return {seen.begin(), seen.end()};
}

std::vector<Weight> dominants_below(const Weight& lam_plus) {
  const int N = static_cast<int>(lam_plus.size());
  std::vector<long> bound(static_cast<std::size_t>(N));
  long s = 0;
  for (int i = 0; i < N; ++i) {
    s += lam_plus[i];
    bound[i] = s;
  }
  std::vector<Weight> out;
  Weight cur(static_cast<std::size_t>(N));
  auto rec = [&](auto&& self, int pos, int prev, long sum) -> void {
    if (pos == N) {
      out.push_back(cur);
      return;
    }
    int hi = static_cast<int>(std::min<long>(prev, bound[pos] - sum));
    for (int v = hi; v >= 0; --v) {
      cur[pos] = v;
      self(self, pos + 1, v, sum + v);
    }
  };
  rec(rec, 0, lam_plus.empty() ? 0 : static_cast<int>(bound[0]), 0);
  return out;
}

std::vector<Weight> span_below(const Weight& lam) {
  const Weight lp = dominant(lam);
  std::set<Weight> out;
  for (const Weight& mu : dominants_below(lp)) {
    if (mu == lp) {
      for (const Weight& w : orbit(mu))
        if (dominance_leq(w, lam)) out.insert(w);
    } else {
      for (const Weight& w : orbit(mu)) out.insert(w);
    }
  }
  return {out.begin(), out.end()};
}

bool is_neighbourhood(const WeightData& d, int i, int j, int k, int rp) {
  const int N = static_cast<int>(d.lambda.size());
  if (i < 1 || i > N || j < 1 || j > N || i == j)
    fail(Errc::BadArgument, "is_neighbourhood: bad pair");
  if (std::abs(d.rho_image[i - 1]) - std::abs(d.rho_image[j - 1]) != k) return false;
  const int gap = std::abs(d.lambda[i - 1]) - std::abs(d.lambda[j - 1]);
  if (gap > rp - 1) return false;
  if (gap < rp - 1) return true;
  const int si = d.sigma[i - 1], sj = d.sigma[j - 1];
  if (si > 0 && sj > 0 && i > j) return true;
  if (si < 0 && sj < 0 && i < j) return true;
  if (si < 0 && sj > 0) return true;
  return false;
}

bool is_neighbourhood(const Weight& lam, int i, int j, int k, int rp) {
  return is_neighbourhood(weight_data(lam), i, j, k, rp);
}

bool is_admissible(const Weight& lam, int k, int rp) {
  const WeightData d = weight_data(lam);
  const int N = static_cast<int>(lam.size());
  for (int i = 1; i <= N; ++i)
    for (int j = 1; j <= N; ++j)
      if (i != j && is_neighbourhood(d, i, j, k, rp)) return false;
  return true;
}

Weight nu_family(int N, int r, int J, int sign) {
  if (N < 1 || r < 1 || J < 1 || (sign != 1 && sign != -1))
    fail(Errc::BadArgument, "nu_family: bad parameters");
  Weight v(static_cast<std::size_t>(N));
  for (int i = 1; i <= N; ++i)
    v[i - 1] = sign > 0 ? J + r * (N - i) : -J - r * (i - 1);
  return v;
}

Weight xi0_family(int N, int r) {
  if (N < 1 || r < 1) fail(Errc::BadArgument, "xi0_family: bad parameters");
  const int m = (N + 1) / 2;
  Weight v(static_cast<std::size_t>(N));
  for (int i = 1; i <= N; ++i)
    v[i - 1] = i <= m ? 2 * (m - i) * r : (2 * N - 2 * i + 1) * r;
  return v;
}

Weight xi1_family(int N, int r) {
  if (N < 1 || r < 1) fail(Errc::BadArgument, "xi1_family: bad parameters");
  if (N % 2 == 0) fail(Errc::OddOnly, "xi1_family: defined for odd N only");
  Weight v(static_cast<std::size_t>(N));
  for (int i = 1; i <= N; ++i)
    v[i - 1] = i <= (N - 1) / 2 ? (N - 2 * i) * r : (2 * N - 2 * i) * r;
  return v;
}

Weight xi_plus_family(int N, int r) {
  if (N < 1 || r < 1) fail(Errc::BadArgument, "xi_plus_family: bad parameters");
  Weight v(static_cast<std::size_t>(N));
  for (int i = 1; i <= N; ++i) v[i - 1] = (N - i) * r;
  return v;
}

Families families(int N, int r, int J) {
  Families f;
  f.nu_plus = nu_family(N, r, J, +1);
  f.nu_minus = nu_family(N, r, J, -1);
  f.xi0 = xi0_family(N, r);
  f.xi_plus = xi_plus_family(N, r);
  if (N % 2 == 1) f.xi1 = xi1_family(N, r);
  return f;
}

namespace {

Graph finish_graph(std::vector<Weight> verts,
                   const std::set<std::pair<std::pair<Weight, Weight>, int>>& raw) {
  Graph g;
  g.vertices = std::move(verts);
  std::map<Weight, int> index;
  for (std::size_t i = 0; i < g.vertices.size(); ++i)
    index[g.vertices[i]] = static_cast<int>(i);
  for (const auto& e : raw) {
    int a = index.at(e.first.first), b = index.at(e.first.second);
    if (a > b) std::swap(a, b);
    g.edges.push_back({a, b, e.second});
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.from, x.to, x.label) < std::tie(y.from, y.to, y.label);
  });
  return g;
}

}  // namespace

Graph build_gamma(const Weight& lam0, int k, int rp) {
  if (!is_admissible(lam0, k, rp)) fail(Errc::NotAdmissible, "build_gamma: seed not admissible");
  const int N = static_cast<int>(lam0.size());
  std::set<Weight> seen{lam0};
  std::queue<Weight> bfs;
  bfs.push(lam0);
  std::set<std::pair<std::pair<Weight, Weight>, int>> raw;
  while (!bfs.empty()) {
    Weight cur = std::move(bfs.front());
    bfs.pop();
    for (int g = 1; g <= N; ++g) {
      Weight nw = fin_act(g, cur);
      if (nw == cur || !is_admissible(nw, k, rp)) continue;
      raw.insert({{std::min(cur, nw), std::max(cur, nw)}, g});
      if (seen.insert(nw).second) bfs.push(nw);
    }
  }
  return finish_graph({seen.begin(), seen.end()}, raw);
}

Graph build_gamma_prime(int N) {
  if (N < 2) fail(Errc::BadArgument, "build_gamma_prime: need N >= 2");
  std::vector<BinaryString> verts = all_strings(N);
  std::set<std::pair<std::pair<Weight, Weight>, int>> raw;
  for (const BinaryString& beta : verts) {
    for (int i = 1; i <= N; ++i) {
      BinaryString alpha = string_act(i, beta);
      if (alpha != beta && string_less(alpha, beta)) raw.insert({{alpha, beta}, i});
    }
  }
  // vertices already sorted by string_less; index map in finish_graph uses
  // numeric order, so remap here instead.
  Graph g;
  g.vertices = std::move(verts);
  std::map<Weight, int> index;
  for (std::size_t i = 0; i < g.vertices.size(); ++i)
    index[g.vertices[i]] = static_cast<int>(i);
  for (const auto& e : raw)
    g.edges.push_back({index.at(e.first.first), index.at(e.first.second), e.second});
  std::sort(g.edges.begin(), g.edges.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.from, x.to, x.label) < std::tie(y.from, y.to, y.label);
  });
  return g;
}

std::size_t count_edges(const Graph& g) { return g.edges.size(); }

bool string_less(const BinaryString& a, const BinaryString& b) {
  if (a.size() != b.size()) fail(Errc::BadArgument, "string_less: length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] > b[i];  // + (=+1) sorts before - (=-1)
  return false;
}

int string_rank(const BinaryString& a) {
  int r = 0;
  for (int x : a) r = 2 * r + (x < 0 ? 1 : 0);
  return r;
}

BinaryString string_from_rank(int rank, int N) {
  if (N < 1 || rank < 0 || rank >= (1 << N))
    fail(Errc::BadArgument, "string_from_rank: out of range");
  BinaryString a(static_cast<std::size_t>(N));
  for (int i = N - 1; i >= 0; --i) {
    a[i] = (rank & 1) ? -1 : +1;
    rank >>= 1;
  }
  return a;
}

std::string string_text(const BinaryString& a) {
  std::string s;
  for (int x : a) s += x < 0 ? '-' : '+';
  return s;
}

BinaryString string_parse(const std::string& s) {
  BinaryString a;
  for (char c : s) {
    if (c == '+')
      a.push_back(+1);
    else if (c == '-')
      a.push_back(-1);
    else
      fail(Errc::ParseError, "string_parse: expected '+' or '-'");
  }
  if (a.empty()) fail(Errc::ParseError, "string_parse: empty string");
  return a;
}

BinaryString string_act(int i, const BinaryString& a) {
  const int N = static_cast<int>(a.size());
  if (i < 1 || i > N) fail(Errc::BadArgument, "string_act: index out of range");
  BinaryString b = a;
  if (i == N)
    b[N - 1] = -b[N - 1];
  else
    std::swap(b[i - 1], b[i]);
  return b;
}

std::vector<BinaryString> all_strings(int N) {
  std::vector<BinaryString> v;
  v.reserve(std::size_t{1} << N);
  for (int r = 0; r < (1 << N); ++r) v.push_back(string_from_rank(r, N));
  return v;
}

BinaryString phi(const Weight& nu, int sign) {
  BinaryString a(nu.size());
  for (std::size_t i = 0; i < nu.size(); ++i) a[i] = sign_of(sign * nu[i]);
  return a;
}

Weight phi_inverse(const BinaryString& alpha, int sign, int N, int r, int J) {
  if (static_cast<int>(alpha.size()) != N)
    fail(Errc::BadArgument, "phi_inverse: length mismatch");
  std::set<int> S;
  for (int t = 0; t < N; ++t) S.insert(J + t * r);
  Weight nu(alpha.size());
  for (int i = 0; i < N; ++i) {
    const bool plus = alpha[i] > 0;
    int val;
    if ((sign > 0) == plus)
      val = *S.rbegin();  // max, kept positive
    else
      val = -*S.begin();  // -min
    nu[i] = val;
    S.erase(std::abs(val));
  }
  return nu;
}

bool check_graph_iso(const Graph& gamma, const Graph& gamma_prime, int sign) {
  if (gamma.vertices.size() != gamma_prime.vertices.size()) return false;
  if (gamma.edges.size() != gamma_prime.edges.size()) return false;
  std::map<Weight, int> pidx;
  for (std::size_t i = 0; i < gamma_prime.vertices.size(); ++i)
    pidx[gamma_prime.vertices[i]] = static_cast<int>(i);
  std::vector<int> m(gamma.vertices.size());
  std::set<int> hit;
  for (std::size_t i = 0; i < gamma.vertices.size(); ++i) {
    auto it = pidx.find(phi(gamma.vertices[i], sign));
    if (it == pidx.end()) return false;
    m[i] = it->second;
    if (!hit.insert(it->second).second) return false;
  }
  std::set<std::tuple<int, int, int>> want, got;
  for (const Edge& e : gamma_prime.edges) want.insert({e.from, e.to, e.label});
  for (const Edge& e : gamma.edges) {
    int a = m[static_cast<std::size_t>(e.from)], b = m[static_cast<std::size_t>(e.to)];
    if (a > b) std::swap(a, b);
    got.insert({a, b, e.label});
  }
  return want == got;
}

}  // namespace qkz::weyl

#pragma once

#include <qkz/error.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace qkz::weyl {

// Integer weight vector of length N.
using Weight = std::vector<int>;

inline int sign_of(int x) { return x < 0 ? -1 : +1; }

// Affine action on Z^N: i=0 sends v1 to -1-v1, 1<=i<=N-1 swaps v_i and
// v_{i+1}, i=N negates v_N.
Weight act(int i, const Weight& v);

Weight dominant(const Weight& v);  // |entries| sorted descending
Weight rho(int N);                 // (N-1, N-2, ..., 0)

// b - a lies in the nonnegative span of e_i - e_{i+1} (i<N) and e_N,
// i.e. all partial sums of b - a are >= 0.
bool dominance_leq(const Weight& a, const Weight& b);

enum class Cmp { Less, Equal, Greater, Incomparable };

// Partial order: a > b iff a+ > b+ (dominance), or a+ = b+ and a > b
// (dominance on the vectors themselves). Never totalized.
Cmp compare(const Weight& a, const Weight& b);

struct WeightData {
  Weight lambda;
  Weight lambda_plus;
  // w = s_{word[0]} s_{word[1]} ... (rightmost factor applied first),
  // shortest element with w(lambda_plus) = lambda.
  std::vector<int> word;
  Weight rho_image;        // w(rho)
  std::vector<int> sigma;  // entrywise sign of lambda, sign(0) = +1
};

WeightData weight_data(const Weight& lam);

std::vector<Weight> orbit(const Weight& lam);  // finite Weyl orbit, sorted lex

// Dominant mu with mu <= lam_plus in dominance order, lex descending.
std::vector<Weight> dominants_below(const Weight& lam_plus);

// All mu with mu preceq lam (strictly below or equal), sorted lex.
std::vector<Weight> span_below(const Weight& lam);

// Neighbourhood pair test, 1-based indices i != j.
bool is_neighbourhood(const WeightData& d, int i, int j, int k, int rp);
bool is_neighbourhood(const Weight& lam, int i, int j, int k, int rp);
bool is_admissible(const Weight& lam, int k, int rp);

Weight nu_family(int N, int r, int J, int sign);  // sign = +1 / -1
Weight xi0_family(int N, int r);
Weight xi1_family(int N, int r);  // N odd only
Weight xi_plus_family(int N, int r);

struct Families {
  Weight nu_plus, nu_minus, xi0, xi_plus;
  std::optional<Weight> xi1;  // absent for N even
};
Families families(int N, int r, int J);

struct Edge {
  int from, to, label;
  bool operator==(const Edge&) const = default;
};

struct Graph {
  std::vector<Weight> vertices;  // sorted; edges satisfy from < to
  std::vector<Edge> edges;
};

Graph build_gamma(const Weight& lam0, int k, int rp);
Graph build_gamma_prime(int N);
std::size_t count_edges(const Graph& g);

// Binary strings: entries +1 / -1. Lexicographic order uses + < -, so
// (+...+) is minimal and (-...-) maximal.
using BinaryString = std::vector<int>;

bool string_less(const BinaryString& a, const BinaryString& b);
int string_rank(const BinaryString& a);  // lex rank, 0 = (+...+)
BinaryString string_from_rank(int rank, int N);
std::string string_text(const BinaryString& a);
BinaryString string_parse(const std::string& s);
BinaryString string_act(int i, const BinaryString& a);  // 1..N-1 swap, N flips last
std::vector<BinaryString> all_strings(int N);           // sorted lex

BinaryString phi(const Weight& nu, int sign);
Weight phi_inverse(const BinaryString& alpha, int sign, int N, int r, int J);

// True iff phi_sign maps gamma onto gamma_prime carrying edge labels.
bool check_graph_iso(const Graph& gamma, const Graph& gamma_prime, int sign);

}  // namespace qkz::weyl

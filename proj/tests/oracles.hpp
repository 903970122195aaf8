#pragma once
// Independent reference computations used by the tests. Nothing here calls
// into the library's arithmetic beyond reading coordinates.
#include <vector>

#include "eulerlab/ext.hpp"
#include "eulerlab/rational.hpp"

namespace oracle {

using eulerlab::i64;
using eulerlab::i128;
using eulerlab::Rational;

inline i64 pw(i64 p, int k) {
  i64 r = 1;
  while (k-- > 0) r *= p;
  return r;
}

inline i64 md(i128 x, i64 q) {
  i128 r = x % q;
  return static_cast<i64>(r < 0 ? r + q : r);
}

// sum_{k=1}^{K} (-1)^(k+1) x^k / k in exact rationals.
inline Rational log_partial_sum(const Rational& x, int K) {
  Rational s = 0, xk = 1;
  for (int k = 1; k <= K; ++k) {
    xk *= x;
    s += (k % 2 ? xk : Rational(-xk)) / k;
  }
  return s;
}

// Iterates a -> a^p mod p^M until it stops changing.
inline i64 iterate_to_fixed_point(i64 a, i64 p, int M) {
  i64 q = pw(p, M), x = md(a, q);
  while (true) {
    i64 y = 1;
    for (int i = 0; i < p; ++i) y = md(static_cast<i128>(y) * x, q);
    if (y == x) return x;
    x = y;
  }
}

// Polynomials modulo (p^N, Phi_{p^m}) with schoolbook long division.
class CycloOracle {
 public:
  CycloOracle(i64 p, int m, int N) : p_(p), q_(pw(p, N)) {
    i64 s = pw(p, m - 1);
    phi_.assign((p - 1) * s + 1, 0);
    for (i64 j = 0; j < p; ++j) phi_[j * s] = 1;
    deg_ = static_cast<int>((p - 1) * s);
  }
  std::vector<i64> reduce(std::vector<i64> a) const {
    for (int d = static_cast<int>(a.size()) - 1; d >= deg_; --d) {
      i64 c = a[d];
      if (c == 0) continue;
      for (int j = 0; j <= deg_; ++j)
        a[d - deg_ + j] = md(static_cast<i128>(a[d - deg_ + j]) - static_cast<i128>(c) * phi_[j], q_);
    }
    a.resize(deg_);
    return a;
  }
  std::vector<i64> mul(const std::vector<i64>& a, const std::vector<i64>& b) const {
    std::vector<i64> r(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        r[i + j] = md(static_cast<i128>(r[i + j]) + static_cast<i128>(a[i]) * b[j], q_);
    return reduce(r);
  }
  std::vector<i64> substitute(const std::vector<i64>& a, i64 s) const {
    std::vector<i64> r(a.size() * s + 1, 0);
    for (std::size_t k = 0; k < a.size(); ++k) r[k * s] = md(static_cast<i128>(r[k * s]) + a[k], q_);
    return reduce(r);
  }

 private:
  i64 p_, q_;
  int deg_;
  std::vector<i64> phi_;
};

inline std::vector<i64> coeffs_of(const eulerlab::ExtScalar& x, int N) {
  std::vector<i64> r;
  for (int k = 0; k < x.field().cdeg(); ++k) r.push_back(x.coeff(0, k).residue(N));
  return r;
}

}  // namespace oracle

namespace oracle {

// Group ring elements in the gamma basis, multiplied by cyclic convolution.
struct GammaPoly {
  i64 q;
  std::vector<i64> g;
};

inline GammaPoly gmul(const GammaPoly& a, const GammaPoly& b) {
  std::size_t N = a.g.size();
  GammaPoly r{a.q, std::vector<i64>(N, 0)};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      r.g[(i + j) % N] = md(static_cast<i128>(r.g[(i + j) % N]) + static_cast<i128>(a.g[i]) * b.g[j], a.q);
  return r;
}

// sum_k c_k (gamma - 1)^k expanded by repeated multiplication.
inline std::vector<i64> u_to_gamma(const std::vector<i64>& c, i64 q) {
  std::size_t N = c.size();
  GammaPoly acc{q, std::vector<i64>(N, 0)};
  GammaPoly pw{q, std::vector<i64>(N, 0)};
  pw.g[0] = 1;
  GammaPoly u{q, std::vector<i64>(N, 0)};
  u.g[0] = md(-1, q);
  if (N > 1) u.g[1] = 1; else u.g[0] = 0;
  for (std::size_t k = 0; k < N; ++k) {
    for (std::size_t j = 0; j < N; ++j) acc.g[j] = md(static_cast<i128>(acc.g[j]) + static_cast<i128>(c[k]) * pw.g[j], q);
    pw = gmul(pw, u);
  }
  return acc.g;
}

}  // namespace oracle

#include <algorithm>
#include <numeric>

namespace oracle {

// Leibniz formula over all permutations, for any ring type.
template <class T>
T leibniz(const std::vector<std::vector<T>>& A, const T& zero, const T& one) {
  int n = static_cast<int>(A.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  T total = zero;
  do {
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inv;
    T term = one;
    for (int i = 0; i < n; ++i) term = term * A[i][perm[i]];
    total = inv % 2 ? total - term : total + term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

}  // namespace oracle

#include <stdexcept>

#include "eulerlab/groupring.hpp"

namespace oracle {

using eulerlab::ExtField;
using eulerlab::ExtScalar;
using eulerlab::GammaCharacter;
using eulerlab::galois_act;

// Exponent e with a = w (1+p)^e mod p^K for some w of order dividing p-1,
// found by exhaustive search.
inline i64 brute_gamma_exponent(i64 a, i64 p, int K) {
  const i64 q = pw(p, K);
  i64 g = 1;
  for (i64 e = 0; e < q / p; ++e) {
    for (i64 w = 1; w < q; ++w) {
      if (static_cast<i64>(static_cast<i128>(w) * g % q) != md(a, q)) continue;
      i64 t = 1;
      for (int i = 0; i < p - 1; ++i) t = md(static_cast<i128>(t) * w, q);
      if (t == 1) return e;
    }
    g = md(static_cast<i128>(g) * (1 + p), q);
  }
  throw std::logic_error("no exponent found");
}

inline i64 power_mod(i64 b, i64 e, i64 q) {
  i64 r = 1 % q;
  for (i64 k = 0; k < e; ++k) r = md(static_cast<i128>(r) * b, q);
  return r;
}

// Gauss sum of chi over (Z/p^m)^*, summed term by term in the field F.
inline ExtScalar brute_gauss(const GammaCharacter& chi, const ExtField& F, int N) {
  const i64 p = chi.p;
  const int m = chi.k + 1;
  const i64 pm = pw(p, m), pk = pw(p, chi.k);
  const i64 unit_step = pw(p, F.m - chi.k);  // zeta_{p^k} inside level F.m
  const i64 zeta_m = pw(p, F.m - m);
  ExtScalar s(F, N);
  for (i64 a = 1; a < pm; ++a) {
    if (a % p == 0) continue;
    i64 e = brute_gamma_exponent(a, p, m) % pk * chi.j % pk;
    s += ExtScalar::zeta_power(F, e * unit_step + a * zeta_m, N);
  }
  return s;
}

// sum_j sigma_j(x) chi(gamma)^j with sigma_j the automorphism zeta -> zeta^{(1+p)^j}.
inline ExtScalar brute_char_sum(const ExtScalar& x, int n, const GammaCharacter& chi) {
  const ExtField& F = x.field();
  const i64 p = F.p, q = pw(p, F.m);
  ExtScalar s(F, x.abs_prec());
  for (i64 j = 0; j < pw(p, n); ++j) {
    ExtScalar term = galois_act(power_mod(1 + p, j, q), x);
    if (chi.k > 0) term = term * ExtScalar::zeta_power(F, chi.j * j * pw(p, F.m - chi.k), x.abs_prec());
    s += term;
  }
  return s;
}

// x * c = target in L[G_n] (cyclic convolution), Gaussian elimination with
// the pivot of least valuation.
inline std::vector<ExtScalar> solve_circulant(const std::vector<ExtScalar>& c, const std::vector<ExtScalar>& target) {
  const int D = static_cast<int>(c.size());
  std::vector<std::vector<ExtScalar>> A(D, std::vector<ExtScalar>(D + 1));
  for (int k = 0; k < D; ++k) {
    for (int j = 0; j < D; ++j) A[k][j] = c[((k - j) % D + D) % D];
    A[k][D] = target[k];
  }
  for (int col = 0; col < D; ++col) {
    int piv = -1;
    for (int r = col; r < D; ++r)
      if (!A[r][col].is_zero() && (piv < 0 || A[r][col].val() < A[piv][col].val())) piv = r;
    if (piv < 0) throw std::logic_error("singular circulant system");
    std::swap(A[piv], A[col]);
    for (int r = 0; r < D; ++r) {
      if (r == col || A[r][col].is_zero()) continue;
      ExtScalar f = A[r][col] / A[col][col];
      for (int j = col; j <= D; ++j) A[r][j] -= f * A[col][j];
    }
  }
  std::vector<ExtScalar> x;
  for (int k = 0; k < D; ++k) x.push_back(A[k][D] / A[k][k]);
  return x;
}

inline ExtScalar eval_gamma(const std::vector<ExtScalar>& g, const GammaCharacter& chi, const ExtField& F) {
  ExtScalar s(F, g[0].abs_prec());
  for (std::size_t j = 0; j < g.size(); ++j)
    s += g[j].lift_to(F).mul_zeta(chi.k == 0 ? 0 : chi.j * static_cast<i64>(j) * pw(chi.p, F.m - chi.k));
  return s;
}

inline ExtScalar teich_trace(const ExtScalar& x, int K) {
  const i64 p = x.field().p, q = pw(p, K);
  ExtScalar s(x.field(), x.abs_prec());
  for (i64 a = 1; a < p; ++a) s += galois_act(iterate_to_fixed_point(a, p, K) % q, x);
  return s;
}

}  // namespace oracle

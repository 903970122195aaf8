#pragma once
// Two-term complexes P --psi--> P over Z/p^M[G_n] (and truncated Lambda),
// explicit Bockstein maps, the Bockstein regulator, the four maps of the
// descent diagram and a generator of synthetic complexes.
//
// Conventions. psi is stored as a d x d matrix whose row i is the
// functional psi_i = b_i^* o psi, so psi_i(b_j) = m[i][j]. Roles: row 1 is
// zero (b_1 maps onto the free rank-one quotient), rows 2..r take values in
// the augmentation ideal. A wedge of s functionals acts on b_1 ^ ... ^ b_d by
//   sum_K sign(K, rest) det(psi_i(b_j))_{j not in K} b_K,
// which for s = d-1 is sum_k (-1)^{k+1} det(...)_{j != k} b_k.
#include <cstdint>
#include <map>
#include <vector>

#include "eulerlab/derivative.hpp"
#include "eulerlab/padic.hpp"

namespace eulerlab {

struct TwoTermComplex {
  Ctx ctx;
  int d = 0;
  int r = 0;
  ModuleMap psi;

  // RoleError when r is out of range, row 1 is nonzero or a row 2..r has
  // an entry outside I.
  void validate() const;
  TwoTermComplex project(const Ctx& lower) const;
  // psi at level 0 as an integer matrix mod p^M.
  Mat level0() const;
};

// The same data over Z/p^M[[u]]/(u^D).
struct LambdaComplex {
  i64 p = 0;
  int M = 0;
  int D = 0;
  int d = 0;
  int r = 0;
  std::vector<std::vector<IwasawaTrunc>> psi;

  TwoTermComplex at_level(const Ctx& ctx) const;
};

// s (b_1 ^ ... ^ b_d) (x) (b_1^* ^ ... ^ b_d^*).
struct DetElement {
  GroupRingElement s;
};

// An element of P_0 (x) Q_n^degree: one class per basis vector b_k.
struct QuotientVector {
  Ctx ctx;
  int degree = 0;
  GRVector reps;
  std::vector<AugClass> classes;

  static QuotientVector from_reps(const Ctx& ctx, int degree, GRVector reps);
  bool operator==(const QuotientVector& o) const {
    return degree == o.degree && classes == o.classes;
  }
  bool is_zero() const;
  QuotientVector operator-(const QuotientVector& o) const;
};

// beta_{i,n}(a) for a in P_0 (coordinates mod p^M) and 2 <= i <= r (1-based).
AugClass beta(const Vec& a, int i, const TwoTermComplex& C);
// The representative psi_{i,n}(a~) with a~ the lift of a along the norm.
GroupRingElement beta_rep(const Vec& a, int i, const TwoTermComplex& C);

// Boc_{n,x}(y_1 ^ ... ^ y_r) for y_i in ker psi_0. NotCocycle otherwise,
// ArityError unless exactly r vectors are given.
QuotientVector boc_map(const std::vector<Vec>& ys, const TwoTermComplex& C);
// Boc_{n,x} on a general element of wedge^r P_0 given by its coordinates on
// b_K (bitmask K with r bits). No cocycle check.
QuotientVector boc_wedge(const std::map<unsigned, i64>& y, const TwoTermComplex& C);

// Pi_n(z) in P_n.
GRVector pi_n(const TwoTermComplex& C, const DetElement& z);
// Pi_infinity on the generator of det(C_infinity), in Lambda coordinates.
std::vector<IwasawaTrunc> pi_lambda(const LambdaComplex& C);
// N_n(z): the level-0 scalar.
i64 descend(const DetElement& z);
// Pi_x of a level-0 determinant element with scalar s0, in wedge^r P_0:
// (-1)^{d-r} (wedge_{r<i<=d} psi_{i,0})(s0 b_1 ^ .. ^ b_d) in the
// survivors-first convention above.
std::map<unsigned, i64> pi_x(const TwoTermComplex& C, i64 s0);

struct DescentResult {
  QuotientVector left;    // N_n(Pi_n(z))
  QuotientVector right;   // Boc_{n,x}(Pi_x(N_n(z)))
  QuotientVector residual;
};
DescentResult descent_commutes(const TwoTermComplex& C, const DetElement& z);

// (r-1) + r(d-r) + (r-1)(d-r) mod 2: the lower-path sign bookkeeping when
// contractions list the contracted vectors first.
int descent_sign_exponent(int d, int r);

// Lemma on symmetric pairings. f is an r x r matrix with f(x_i)(x_j) =
// f[i][j], ell a nonzero functional on M = L^r, x in M. Returns the
// difference of the two composites on x_1 ^ ... ^ x_r, as a multiple of
// x_1^* ^ ... ^ x_r^*. HypothesisError when f is not symmetric and
// require_symmetric is set.
struct LemmaAlgResult {
  Padic lhs;
  Padic rhs;
  Padic residual;
};
LemmaAlgResult lemma_alg_check(const std::vector<std::vector<Padic>>& f,
                               const std::vector<Padic>& ell, const std::vector<Padic>& x,
                               bool require_symmetric = true);

struct SynthInstance {
  LambdaComplex complex;
  Mat h1_basis0;      // rows: a basis of ker psi_0 (exact over Z_p)
  int tors_exp = 0;   // #H^2_tors = p^tors_exp at level 0
};

// psi = L diag(0, u w_2, .., u w_r, t w_{r+1}, w_{r+2}, ..) R with units
// w_i, L block lower triangular (first row e_1) and R invertible, so that
// the characteristic ideal is t (gamma-1)^{r-1}. InfeasibleTarget when
// t has augmentation 0 mod p^M or d = r with t not a unit.
SynthInstance synth_generate(i64 p, int M, int D, int d, int r, std::uint64_t seed,
                             const IwasawaTrunc& t);

}  // namespace eulerlab

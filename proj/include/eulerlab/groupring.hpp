#pragma once
// Z/p^M[G_n] for G_n cyclic of order p^n, the truncated Iwasawa algebra,
// augmentation filtration and characters of Gamma.
//
// Elements are stored in the basis u^k = (gamma - 1)^k, 0 <= k < p^n.
// The ideal I^a is handled as an explicit lattice: at finite level it is
// not spanned by high powers of u alone (3u lies in I^3 when p=3, n=1).
#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "eulerlab/ext.hpp"
#include "eulerlab/lattice.hpp"

namespace eulerlab {

class GroupRingCtx;
using Ctx = std::shared_ptr<const GroupRingCtx>;

class GroupRingCtx {
 public:
  // Shared, immutable context for (p, n, M).
  static Ctx get(i64 p, int n, int M);

  i64 p() const { return mod_.p(); }
  int n() const { return n_; }
  int M() const { return mod_.M(); }
  int N() const { return N_; }  // |G_n|
  const Modulus& mod() const { return mod_; }

  // Coordinates of gamma^j in the u-basis: column j of this matrix.
  const Mat& gamma_to_u() const { return g2u_; }
  const Mat& u_to_gamma() const { return u2g_; }
  // u^N written in lower powers.
  const Vec& top_relation() const { return top_; }

  // HNF lattice of I^a inside the u-coordinate space. Cached per a.
  const Lattice& aug_lattice(int a) const;
  // Least D with u^D = 0 in this truncated ring.
  int nilpotency() const;
  // Largest a with p^M * I contained in I^a over Z_p (membership in I^a is
  // then decided faithfully by residues mod p^M for elements of I).
  int faithful_depth() const;

 private:
  GroupRingCtx(i64 p, int n, int M);
  Modulus mod_;
  int n_ = 0;
  int N_ = 1;
  Mat g2u_, u2g_;
  Vec top_;
  mutable std::mutex mu_;
  mutable std::map<int, std::unique_ptr<Lattice>> lattices_;
  mutable int nilpotency_ = -1;
  mutable int faithful_ = -1;
};

class GroupRingElement {
 public:
  GroupRingElement() = default;
  explicit GroupRingElement(Ctx ctx);
  GroupRingElement(Ctx ctx, Vec u_coeffs);

  static GroupRingElement from_gamma(Ctx ctx, const Vec& gamma_coeffs);
  static GroupRingElement gamma_pow(Ctx ctx, i64 e);
  static GroupRingElement u_pow(Ctx ctx, int k);
  static GroupRingElement scalar(Ctx ctx, i64 c);
  // N_G = sum of all group elements.
  static GroupRingElement norm_element(Ctx ctx);

  const Ctx& ctx() const { return ctx_; }
  const Vec& coeffs() const { return c_; }
  Vec gamma_coeffs() const;
  i64 augmentation() const { return c_.empty() ? 0 : c_[0]; }
  bool is_zero() const;

  GroupRingElement operator+(const GroupRingElement& o) const;
  GroupRingElement operator-(const GroupRingElement& o) const;
  GroupRingElement operator-() const;
  GroupRingElement operator*(const GroupRingElement& o) const;
  GroupRingElement operator*(i64 s) const;
  GroupRingElement& operator+=(const GroupRingElement& o) { return *this = *this + o; }
  GroupRingElement& operator-=(const GroupRingElement& o) { return *this = *this - o; }
  bool operator==(const GroupRingElement& o) const { return c_ == o.c_; }

  // Multiplication by u, cheaper than a full product.
  GroupRingElement times_u() const;
  // gamma -> gamma^{-1}.
  GroupRingElement involution() const;
  // Image under G_n -> G_{n'} for a context of lower level, same p and M.
  GroupRingElement project(const Ctx& lower) const;

 private:
  Ctx ctx_;
  Vec c_;
};

// Largest a <= a_max with x in I^a. `top` is set when x = 0 at precision.
// Answers concern the residue of x modulo p^M. They are flagged
// precision_limited when capped by a_max or when a+1 exceeds the depth
// up to which the truncated lattices are faithful.
struct AugOrder {
  int order = 0;
  bool top = false;
  bool precision_limited = false;
};
AugOrder aug_order(const GroupRingElement& x, int a_max);

// Truncated Iwasawa algebra Z/p^M[[u]] / (u^D).
class IwasawaTrunc {
 public:
  IwasawaTrunc() = default;
  IwasawaTrunc(i64 p, int M, int D);
  IwasawaTrunc(i64 p, int M, Vec coeffs);  // D = coeffs.size()

  static IwasawaTrunc scalar(i64 p, int M, int D, i64 c);
  static IwasawaTrunc u_pow(i64 p, int M, int D, int k);
  // gamma^e = (1+u)^e for an integer e (negative allowed).
  static IwasawaTrunc gamma_pow(i64 p, int M, int D, i64 e);

  i64 p() const { return mod_.p(); }
  int M() const { return mod_.M(); }
  int D() const { return static_cast<int>(c_.size()); }
  const Vec& coeffs() const { return c_; }
  const Modulus& mod() const { return mod_; }
  bool is_zero() const;

  IwasawaTrunc operator+(const IwasawaTrunc& o) const;
  IwasawaTrunc operator-(const IwasawaTrunc& o) const;
  IwasawaTrunc operator-() const;
  IwasawaTrunc operator*(const IwasawaTrunc& o) const;
  IwasawaTrunc operator*(i64 s) const;
  bool operator==(const IwasawaTrunc& o) const { return c_ == o.c_; }
  // Inverse of an element with unit constant term.
  IwasawaTrunc inverse() const;
  // Drops the first k coefficients (division by u^k); the caller checks
  // that they vanish.
  IwasawaTrunc shift_down(int k) const;

  // Ring map to level n. PrecisionError unless D reaches the nilpotency
  // index of u at that level, which makes the map well defined.
  GroupRingElement reduce_to_level(const Ctx& ctx) const;

 private:
  Modulus mod_;
  Vec c_;
};

// Class in Q^a = I^a / I^{a+1}.
struct AugClass {
  bool lambda = false;  // Lambda-level when true
  int level = 0;        // finite level n (ignored at Lambda-level)
  int degree = 0;
  Vec nf;               // canonical form mod I^{a+1} (finite level)
  i64 coord = 0;        // coordinate against (gamma-1)^a (Lambda-level)

  bool operator==(const AugClass& o) const {
    return lambda == o.lambda && level == o.level && degree == o.degree && nf == o.nf &&
           coord == o.coord;
  }
  bool operator!=(const AugClass& o) const { return !(*this == o); }
};

// NotInIdeal when x is not in I^a.
AugClass quotient_class(const GroupRingElement& x, int a);
AugClass quotient_class(const IwasawaTrunc& x, int a);
// Finite level: Q_n^a is cyclic on u^a. Returns t with x = t u^a mod I^{a+1}
// together with the exponent e of the order p^e of Q_n^a (t is taken in
// [0, p^e)).
std::pair<i64, int> class_coordinate(const GroupRingElement& x, int a);
int quotient_order_exp(const Ctx& ctx, int a);

// Character of Gamma with chi(gamma) = zeta_{p^k}^j; k = 0 is trivial.
struct GammaCharacter {
  i64 p = 3;
  int k = 0;
  i64 j = 0;

  bool trivial() const { return k == 0; }
  // Exponent m of the conductor p^m as a Dirichlet character (0 if trivial).
  int conductor_exp() const { return k == 0 ? 0 : k + 1; }
  GammaCharacter inverse() const;
};
// Characters with exactly the given k (for k = 0 only the trivial one).
std::vector<GammaCharacter> characters_of_exact_level(i64 p, int k);

// e with <a> = (1+p)^e mod p^K, e taken in [0, p^(K-1)).
i64 gamma_exponent(i64 a, i64 p, int K);
// The image of sigma_a in G_n as an exponent of gamma.
i64 sigma_exponent(i64 a, const Ctx& ctx);

// sum_k c_k (zeta - 1)^k with zeta = chi(gamma), in the field `target`
// (which must have cyclotomic level >= chi.k).
ExtScalar character_eval(const GroupRingElement& x, const GammaCharacter& chi,
                         const ExtField& target);
ExtScalar character_eval(const GroupRingElement& x, const GammaCharacter& chi);

// Gauss sum of chi viewed on (Z/p^m)^* through its Gamma-part; 1 for the
// trivial character. ConductorError if chi does not have level k exactly.
ExtScalar gauss_sum(const GammaCharacter& chi, int M);
ExtScalar gauss_sum(const GammaCharacter& chi, const ExtField& target, int M);

// cd (c - sigma_c)(d - sigma_d) at level n. DomainError unless gcd(cd, 6p) = 1.
GroupRingElement tcd_element(i64 c, i64 d, const Ctx& ctx);

}  // namespace eulerlab

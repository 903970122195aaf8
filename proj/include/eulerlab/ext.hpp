#pragma once
// Elements of Q_p(alpha), Q_p(zeta_{p^m}) and their composite.
//
// Coordinates are c[i][k] against alpha^i * zeta^k with i < 2 (alpha^2 =
// a_p alpha - p) and k < phi(p^m), the cyclotomic part reduced modulo
// Phi_{p^m}(X) = sum_{j<p} X^(j p^(m-1)).
#include <memory>
#include <optional>
#include <vector>

#include "eulerlab/padic.hpp"

namespace eulerlab {

struct ExtField {
  i64 p = 3;
  std::optional<i64> ap;  // present: adjoin the class of X in X^2 - ap X + p
  int m = 0;              // cyclotomic level

  int qdeg() const { return ap ? 2 : 1; }
  int cdeg() const;
  int dim() const { return qdeg() * cdeg(); }
  ExtField at_level(int level) const { return {p, ap, level}; }
  bool operator==(const ExtField& o) const { return p == o.p && ap == o.ap && m == o.m; }
};

class ExtScalar {
 public:
  ExtScalar() = default;
  // Zero at absolute precision N.
  ExtScalar(const ExtField& F, int N);

  static ExtScalar from_padic(const ExtField& F, const Padic& x);
  static ExtScalar from_int(const ExtField& F, i64 x, int N);
  // zeta_{p^m}^k as an exact element stored at precision N.
  static ExtScalar zeta_power(const ExtField& F, i64 k, int N);
  // The class of X in the quadratic factor; requires F.ap.
  static ExtScalar alpha(const ExtField& F, int N);

  const ExtField& field() const { return F_; }
  const Padic& coeff(int i, int k) const { return c_[i * cdeg_ + k]; }
  const std::vector<Padic>& coeffs() const { return c_; }

  bool is_zero() const;
  int abs_prec() const;
  // Minimum coordinate valuation (abs_prec when zero).
  int val() const;
  // True when the element has no zeta component (lies in Q_p(alpha)).
  bool in_base() const;

  ExtScalar operator-() const;
  ExtScalar operator+(const ExtScalar& o) const;
  ExtScalar operator-(const ExtScalar& o) const;
  ExtScalar operator*(const ExtScalar& o) const;
  ExtScalar operator*(const Padic& s) const;
  // Division is supported for divisors lying in Q_p(alpha).
  ExtScalar operator/(const ExtScalar& o) const;
  ExtScalar operator/(const Padic& s) const;
  ExtScalar& operator+=(const ExtScalar& o) { return *this = *this + o; }
  ExtScalar& operator-=(const ExtScalar& o) { return *this = *this - o; }
  ExtScalar& operator*=(const ExtScalar& o) { return *this = *this * o; }

  // Multiplication by zeta^k, which only permutes and folds coordinates.
  ExtScalar mul_zeta(i64 k) const;
  ExtScalar inverse() const;
  ExtScalar pow(long e) const;
  // Image under zeta_{p^m} = zeta_{p^m2}^(p^(m2-m)), m2 >= m.
  ExtScalar embed(int m2) const;
  ExtScalar with_prec(int N) const;
  // Image in a field with the same quadratic factor (or one added) and
  // cyclotomic level >= this one.
  ExtScalar lift_to(const ExtField& target) const;
  // Conjugation alpha -> a_p - alpha; identity without a quadratic factor.
  ExtScalar conj_alpha() const;

  bool eq(const ExtScalar& o) const { return (*this - o).is_zero(); }

 private:
  friend ExtScalar galois_act(i64 a, const ExtScalar& x);
  friend ExtScalar cyclo_trace(const ExtScalar& x, int m2);
  void add_monomial(int i, i64 e, const Padic& v);

  ExtField F_;
  int cdeg_ = 1;
  std::vector<Padic> c_;
};

// sigma_a: zeta -> zeta^a, identity on the quadratic factor.
ExtScalar galois_act(i64 a, const ExtScalar& x);

// Trace from level m down to level m2 <= m. LevelError if m2 > m.
ExtScalar cyclo_trace(const ExtScalar& x, int m2);

}  // namespace eulerlab

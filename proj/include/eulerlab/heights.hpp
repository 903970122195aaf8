#pragma once
// p-adic regulators from supplied height pairings: R_p, the Bockstein
// regulator via cofactors, Schneider's variant, the L-invariant and the
// Birch and Swinnerton-Dyer elements.
//
// Heights are coordinates against (gamma - 1) in I/I^2 unless a function
// says it works in l_p-coordinates, where gamma - 1 corresponds to
// log_p(chi_cyc(gamma)).
#include <map>
#include <optional>
#include <vector>

#include "eulerlab/ext.hpp"
#include "eulerlab/rational.hpp"

namespace eulerlab {

struct TateData {
  int vq = 0;       // ord_p(q_E) > 0
  ExtScalar logq;   // log_p(q_E), nonzero
};

struct PairingMatrix {
  int r = 0;
  std::vector<std::vector<ExtScalar>> h;
  std::vector<ExtScalar> logs;
  std::optional<TateData> tate;

  // SymmetryError / DomainError on malformed data.
  void validate() const;
  const ExtField& field() const { return logs.at(0).field(); }
};

// A scalar attached to the class of (gamma - 1)^degree.
struct Filtered {
  ExtScalar value;
  int degree = 0;
};

Filtered regulator_rp(const PairingMatrix& m);

// R_omega^Boc = sum_i coords[i] x_i, each coordinate of degree r - 1.
struct BocRegulator {
  std::vector<ExtScalar> coords;
  int degree = 0;
};
BocRegulator boc_regulator(const PairingMatrix& m);

// <x, R^Boc>_p - log_omega(x) R_p for x given by its pairings with x_i.
ExtScalar reg_prop_residual(const PairingMatrix& m, const std::vector<ExtScalar>& pairings,
                            const ExtScalar& logx);

// log_p chi_cyc(gamma) for gamma acting as 1 + p.
ExtScalar log_chi_gamma(const ExtField& F, int N);

struct SchneiderResult {
  std::vector<std::vector<ExtScalar>> pairing;  // l_p-coordinates
  ExtScalar regulator;    // det of the corrected pairing
  ExtScalar closed_form;  // l_p(R_p) - log_omega(l_p R^Boc) / log_p(q_E)
};
// MissingTateData without tate data.
SchneiderResult schneider(const PairingMatrix& m);
// <x, R^Boc>^Sch - log_omega(x) R^Sch, all in l_p-coordinates.
ExtScalar reg_prop2_residual(const PairingMatrix& m, const std::vector<ExtScalar>& pairings,
                             const ExtScalar& logx);

struct LInvariant {
  ExtScalar value;     // log_p(q_E) / ord_p(q_E)
  ExtScalar q1_coord;  // coordinate against gamma - 1 in Q^1
};
LInvariant l_invariant(const std::optional<TateData>& tate, const ExtField& F, int N);
// Tate data from a rational period q: ord_p(q) and the Iwasawa log of q.
TateData tate_from_period(i64 p, const Rational& q, int N);

struct CurveInvariants {
  Rational v_xi{1};
  std::map<i64, Rational> euler_factors;
  Rational sha{1};
  Rational tam{1};
  Rational tors{1};
};

struct EtaReport {
  Rational analytic;    // L_S^*(E,1) / (Omega_xi R_infty)
  Rational algebraic;   // v_xi (prod L_l) #Sha Tam / #tors^2
  // Coefficients of x_1 ^ .. ^ x_r: scalar * log_omega(x_1).
  ExtScalar eta_bsd;
  ExtScalar eta_alg;
  BocRegulator boc_bsd;  // analytic * R^Boc
  BocRegulator boc_alg;  // algebraic * R^Boc
  int val_analytic = 0;
  int val_algebraic = 0;
  bool scalars_equal = false;
  bool lattices_equal = false;  // equal p-adic valuations
};
EtaReport eta_elements(const PairingMatrix& m, const CurveInvariants& inv,
                       const Rational& leading_ratio);

// p-adic valuation of a nonzero rational.
int rational_val(const Rational& x, i64 p);

}  // namespace eulerlab

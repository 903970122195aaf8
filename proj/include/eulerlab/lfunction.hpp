#pragma once
// Interpolation series, the Coleman elements delta_n, Mazur-Tate elements
// from modular symbol tables, alpha-stabilized measures, leading terms and
// the residual checks tying them to regulators.
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "eulerlab/errors.hpp"
#include "eulerlab/groupring.hpp"
#include "eulerlab/heights.hpp"

namespace eulerlab {

enum class Reduction { good_ordinary, good_supersingular, split, nonsplit, additive };
Reduction parse_reduction(const std::string& s);
std::string to_string(Reduction r);

// The pair (alpha, beta) with alpha allowable, over the base field L.
struct Frobenius {
  Reduction reduction = Reduction::good_ordinary;
  ExtField base;  // cyclotomic level 0
  ExtScalar alpha, beta;
  int N = 0;

  static Frobenius good_ordinary(i64 p, i64 ap, int N);
  static Frobenius good_supersingular(i64 p, i64 ap, int N);
  static Frobenius multiplicative(i64 p, bool split, int N);
  static Frobenius from_reduction(Reduction red, i64 p, i64 ap, int N);

  i64 p() const { return base.p; }
  ExtField at_level(int m) const { return base.at_level(m); }
  // (1 - 1/alpha)(1 - 1/beta)^{-1}
  ExtScalar euler_ratio() const;
};

// sum_k c_k (gamma - 1)^k over L. A finite `level` marks a representative
// of an element of L[G_n] (degree < p^n), which evaluates exactly at
// characters of G_n.
struct InterpolationSeries {
  ExtField field;
  std::vector<ExtScalar> c;
  int growth = 1;
  std::optional<int> level;

  // chi(f) in the field of level max(chi.k, field level).
  ExtScalar evaluate(const GammaCharacter& chi) const;
};
// value * (gamma - 1)^a + sum of the given higher terms.
InterpolationSeries series_from_leading(const ExtScalar& value, int a,
                                        const std::vector<ExtScalar>& higher);

// delta_n as its coefficient on nu, an element of L_n stored in the field of
// cyclotomic level n + 1.
struct DeltaElement {
  int n = 0;
  Frobenius frob;
  ExtScalar coeff;
  ExtScalar coeff_second_form;

  // sigma(delta_n) for sigma = gamma^j, j < p^n.
  std::vector<ExtScalar> orbit() const;
};

// Both displayed forms are computed; std::logic_error if they differ and
// PrecisionLoss if the result vanishes at the working precision.
DeltaElement delta_n(const Frobenius& frob, int n);
// Tr_{L_n/L_{n-1}}(delta_n) in the field of level n. LevelError for n = 0.
ExtScalar delta_trace_down(const DeltaElement& d);
// sum_{sigma in G_n} sigma(delta_n) chi(sigma).
ExtScalar delta_character_sum(const DeltaElement& d, const GammaCharacter& chi);
// (1 - 1/alpha)(1 - 1/beta)^{-1} for chi = 1, tau(chi)/alpha^m otherwise.
ExtScalar delta_character_expected(const Frobenius& frob, const GammaCharacter& chi, int level);

// Plus modular symbols [a/p^m]^+ normalized by a period, one map per level.
struct ModularSymbolTable {
  std::string curve;
  i64 p = 3;
  std::vector<i64> ap;  // ap[0] is the Hecke eigenvalue at p
  std::string normalization;
  std::map<int, std::map<i64, Rational>> levels;

  i64 hecke_ap() const;
  int depth() const { return levels.empty() ? -1 : levels.rbegin()->first; }
  // [a/p^m]^+; ValidationError if the level or residue is missing.
  Rational value(int m, i64 a) const;
};

// Checks completeness, [p b / p^m] = [b / p^(m-1)], and the distribution
// relation ap [a/p^m] = sum_k [(a + k p^m)/p^(m+1)] + [a/p^(m-1)] at every
// level where it can be stated. ValidationError names the failing instance.
void validate_table(const ModularSymbolTable& t);

// Random table of the given depth satisfying the distribution relation,
// with [0]^+ = value0.
ModularSymbolTable synthetic_table(i64 p, i64 ap, int depth, const Rational& value0,
                                   std::mt19937_64& rng);

// The table a -> [b a / p^m]^+ for a unit b; its theta elements are
// sigma_b^{-1} theta_n.
ModularSymbolTable twist_table(const ModularSymbolTable& t, i64 b);
// Valid table whose theta elements all lie in I^rank: a table with [0] = 0
// (for rank >= 1) multiplied by (1 - sigma_{1+p})^(rank-1). Rank 0 gives a
// random table with [0] = 1.
ModularSymbolTable synthetic_rank_table(i64 p, i64 ap, int depth, int rank, std::mt19937_64& rng);

struct ThetaElement {
  GroupRingElement theta;  // p^scale_exp times the Mazur-Tate element
  int scale_exp = 0;
};
// theta_n = sum_{a in (Z/p^(n+1))^*} [a/p^(n+1)]^+ sigma_a in Z/p^M[G_n].
ThetaElement theta_from_symbols(const ModularSymbolTable& t, int n, int M);

// sum_{a in (Z/p^m)^*} chi(a) mu(a + p^m Z_p) at the deepest level m, with
// mu(a + p^m) = alpha^{-m}[a/p^m] - alpha^{-m-1}[a/p^(m-1)].
ExtScalar stabilized_measure_eval(const ModularSymbolTable& t, const Frobenius& frob,
                                  const GammaCharacter& chi);
// The same Riemann sum taken at a chosen level m.
ExtScalar stabilized_partial_sum(const ModularSymbolTable& t, const Frobenius& frob,
                                 const GammaCharacter& chi, int m);
// The measure pushed to L[G_n], as a level-n series.
InterpolationSeries stabilized_series(const ModularSymbolTable& t, const Frobenius& frob, int n);

// Vanishing order r (r + 1 when split), leading coefficient as a Q^a
// coordinate.
int expected_order(int r, Reduction red);
struct LeadingTerm {
  ExtScalar value;
  int degree = 0;
};
// OrderViolation at the first nonzero coefficient below the expected order.
LeadingTerm leading_term(const InterpolationSeries& s, int r, Reduction red);
// Class of theta in Q_n^a. OrderViolation with theta's order otherwise.
AugClass theta_leading_class(const GroupRingElement& theta, int r, Reduction red);

// Data of an Iwasawa-Darmon derivative: coefficients of kappa against the
// basis x_i, each of filtration degree r - 1.
struct KappaData {
  std::vector<ExtScalar> coords;
};
// Residual of the Generalized Rubin Formula for a point x given by its
// pairings with the basis and its log, in (gamma - 1)-coordinates.
ExtScalar rubin_residual(const KappaData& kappa, const PairingMatrix& m,
                         const std::vector<ExtScalar>& x_pairings, const ExtScalar& logx,
                         const Frobenius& frob, const LeadingTerm& lead);

struct BsdPrediction {
  ExtScalar value;         // predicted leading coefficient
  int degree = 0;
  ExtScalar prefactor;     // (1-1/alpha)(1-1/beta)^{-1}, or L/log_p(1+p) when split
  ExtScalar regulator;     // R_p, or R_p^Sch in (gamma - 1)-coordinates when split
  Rational scalar;         // v_xi (prod L_l) Sha Tam / tors^2, or the supplied ratio
};
// With `beilinson_ratio` set, L_S^*(E,1)/(Omega_xi R_infty) replaces the
// algebraic scalar.
BsdPrediction padic_bsd_predict(const CurveInvariants& inv, const PairingMatrix& m,
                                const Frobenius& frob,
                                const std::optional<Rational>& beilinson_ratio = std::nullopt);

struct ColemanLevel {
  int n = 0;
  std::vector<ExtScalar> gamma_coeffs;  // Col_n(z) on gamma^j
  InterpolationSeries series;
};
// Col_n(z) = sum_sigma Tr_{L_n/L}(exp*(z_n) sigma(delta_n)) sigma for each
// supplied pair. LevelMismatch when a surrogate's field does not match.
std::vector<ColemanLevel> coleman_pair(const std::vector<ExtScalar>& dual_exp,
                                       const std::vector<DeltaElement>& deltas);

// Coefficients of sum_j g_j gamma^j in the basis (gamma - 1)^i.
std::vector<ExtScalar> gamma_to_u_coeffs(const std::vector<ExtScalar>& g);

}  // namespace eulerlab

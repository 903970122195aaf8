#include "eulerlab/heights.hpp"

#include <algorithm>

#include "eulerlab/errors.hpp"
#include "eulerlab/lattice.hpp"

namespace eulerlab {

namespace {

using EMat = std::vector<std::vector<ExtScalar>>;

int working_prec(const PairingMatrix& m) {
  int N = 0;
  for (const auto& row : m.h)
    for (const auto& x : row) N = std::max(N, x.abs_prec());
  for (const auto& x : m.logs) N = std::max(N, x.abs_prec());
  return N;
}

ExtScalar zero_of(const PairingMatrix& m) { return ExtScalar(m.field(), working_prec(m)); }
ExtScalar one_of(const PairingMatrix& m) { return ExtScalar::from_int(m.field(), 1, working_prec(m)); }

ExtScalar edet(const EMat& A, const PairingMatrix& m) { return det(A, zero_of(m), one_of(m)); }

const TateData& need_tate(const std::optional<TateData>& t) {
  if (!t) throw MissingTateData("Tate period data is required for this computation");
  return *t;
}

}  // namespace

void PairingMatrix::validate() const {
  if (r < 1) throw DomainError("rank must be positive");
  if (static_cast<int>(h.size()) != r || static_cast<int>(logs.size()) != r)
    throw DomainError("pairing matrix and log vector must have length r");
  for (const auto& row : h)
    if (static_cast<int>(row.size()) != r) throw DomainError("pairing matrix must be square");
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j)
      if (!h[i][j].eq(h[j][i]))
        throw SymmetryError("entries (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                            ") and (" + std::to_string(j + 1) + "," + std::to_string(i + 1) + ") differ");
  if (tate) {
    if (tate->vq <= 0) throw DomainError("ord_p(q_E) must be positive");
    if (tate->logq.is_zero()) throw DomainError("log_p(q_E) must be nonzero");
  }
}

Filtered regulator_rp(const PairingMatrix& m) {
  m.validate();
  return {edet(m.h, m), m.r};
}

BocRegulator boc_regulator(const PairingMatrix& m) {
  m.validate();
  BocRegulator out;
  out.degree = m.r - 1;
  for (int i = 0; i < m.r; ++i) {
    EMat rep = m.h;
    for (int k = 0; k < m.r; ++k) rep[k][i] = m.logs[k];
    out.coords.push_back(edet(rep, m));
  }
  return out;
}

ExtScalar reg_prop_residual(const PairingMatrix& m, const std::vector<ExtScalar>& pairings,
                            const ExtScalar& logx) {
  if (static_cast<int>(pairings.size()) != m.r) throw DomainError("need one pairing per basis point");
  auto boc = boc_regulator(m);
  ExtScalar lhs = zero_of(m);
  for (int i = 0; i < m.r; ++i) lhs += pairings[i] * boc.coords[i];
  return lhs - logx * regulator_rp(m).value;
}

ExtScalar log_chi_gamma(const ExtField& F, int N) {
  return ExtScalar::from_padic(F, log_p(Padic::from_int(F.p, 1 + F.p, N + 1), N + 1)).with_prec(N);
}

SchneiderResult schneider(const PairingMatrix& m) {
  m.validate();
  const TateData& t = need_tate(m.tate);
  const int N = working_prec(m);
  const ExtScalar lam = log_chi_gamma(m.field(), N);
  SchneiderResult res;
  res.pairing = m.h;
  for (int i = 0; i < m.r; ++i)
    for (int j = 0; j < m.r; ++j)
      res.pairing[i][j] = lam * m.h[i][j] - m.logs[i] * m.logs[j] / t.logq;
  res.regulator = edet(res.pairing, m);

  // Filtration degree r for R_p and r - 1 for each Boc coordinate.
  ExtScalar lam_r1 = one_of(m);
  for (int k = 1; k < m.r; ++k) lam_r1 *= lam;
  auto boc = boc_regulator(m);
  ExtScalar log_boc = zero_of(m);
  for (int i = 0; i < m.r; ++i) log_boc += m.logs[i] * boc.coords[i];
  res.closed_form = lam_r1 * lam * regulator_rp(m).value - lam_r1 * log_boc / t.logq;
  return res;
}

ExtScalar reg_prop2_residual(const PairingMatrix& m, const std::vector<ExtScalar>& pairings,
                             const ExtScalar& logx) {
  if (static_cast<int>(pairings.size()) != m.r) throw DomainError("need one pairing per basis point");
  auto sch = schneider(m);
  const ExtScalar lam = log_chi_gamma(m.field(), working_prec(m));
  ExtScalar lam_r1 = one_of(m);
  for (int k = 1; k < m.r; ++k) lam_r1 *= lam;
  auto boc = boc_regulator(m);
  ExtScalar lhs = zero_of(m);
  for (int i = 0; i < m.r; ++i) {
    ExtScalar sch_pair = lam * pairings[i] - logx * m.logs[i] / m.tate->logq;
    lhs += sch_pair * lam_r1 * boc.coords[i];
  }
  return lhs - logx * sch.regulator;
}

LInvariant l_invariant(const std::optional<TateData>& tate, const ExtField& F, int N) {
  const TateData& t = need_tate(tate);
  if (t.vq <= 0) throw DomainError("ord_p(q_E) must be positive");
  LInvariant out;
  out.value = t.logq / Padic::from_int(F.p, t.vq, N);
  out.q1_coord = out.value / log_chi_gamma(F, N);
  return out;
}

int rational_val(const Rational& x, i64 p) {
  if (x == 0) throw DomainError("valuation of zero");
  auto count = [p](BigInt n) {
    if (n < 0) n = -n;
    int v = 0;
    while (n % p == 0) {
      n /= p;
      ++v;
    }
    return v;
  };
  return count(numerator(x)) - count(denominator(x));
}

TateData tate_from_period(i64 p, const Rational& q, int N) {
  int v = rational_val(q, p);
  if (v <= 0) throw DomainError("the Tate period must have positive valuation");
  Rational unit = q;
  for (int k = 0; k < v; ++k) unit /= p;
  TateData t;
  t.vq = v;
  t.logq = ExtScalar::from_padic(ExtField{p, std::nullopt, 0},
                                 iwasawa_log(Padic::from_rational(p, unit, N + 1), N + 1).with_prec(N));
  return t;
}

EtaReport eta_elements(const PairingMatrix& m, const CurveInvariants& inv,
                       const Rational& leading_ratio) {
  m.validate();
  const i64 p = m.field().p;
  const int N = working_prec(m);
  EtaReport out;
  out.analytic = leading_ratio;
  Rational alg = inv.v_xi * inv.sha * inv.tam / (inv.tors * inv.tors);
  for (const auto& [ell, L] : inv.euler_factors) alg *= L;
  out.algebraic = alg;

  auto to_ext = [&](const Rational& x) {
    return ExtScalar::from_padic(m.field(), Padic::from_rational(p, x, N));
  };
  out.eta_bsd = to_ext(out.analytic) * m.logs[0];
  out.eta_alg = to_ext(out.algebraic) * m.logs[0];
  auto boc = boc_regulator(m);
  out.boc_bsd = out.boc_alg = boc;
  for (int i = 0; i < m.r; ++i) {
    out.boc_bsd.coords[i] = to_ext(out.analytic) * boc.coords[i];
    out.boc_alg.coords[i] = to_ext(out.algebraic) * boc.coords[i];
  }
  out.val_analytic = rational_val(out.analytic, p);
  out.val_algebraic = rational_val(out.algebraic, p);
  out.scalars_equal = out.analytic == out.algebraic;
  out.lattices_equal = out.val_analytic == out.val_algebraic;
  return out;
}

}  // namespace eulerlab

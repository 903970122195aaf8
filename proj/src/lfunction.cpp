#include "eulerlab/lfunction.hpp"

#include <algorithm>
#include <stdexcept>

#include "eulerlab/errors.hpp"

namespace eulerlab {

Reduction parse_reduction(const std::string& s) {
  if (s == "good_ord") return Reduction::good_ordinary;
  if (s == "good_ss") return Reduction::good_supersingular;
  if (s == "split") return Reduction::split;
  if (s == "nonsplit") return Reduction::nonsplit;
  if (s == "additive") return Reduction::additive;
  throw SchemaError("unknown reduction type '" + s + "'");
}

std::string to_string(Reduction r) {
  switch (r) {
    case Reduction::good_ordinary: return "good_ord";
    case Reduction::good_supersingular: return "good_ss";
    case Reduction::split: return "split";
    case Reduction::nonsplit: return "nonsplit";
    case Reduction::additive: return "additive";
  }
  return "?";
}

// ------------------------------------------------------------ Frobenius

Frobenius Frobenius::good_ordinary(i64 p, i64 ap, int N) {
  Frobenius f;
  f.reduction = Reduction::good_ordinary;
  f.base = ExtField{p, std::nullopt, 0};
  f.N = N;
  f.alpha = ExtScalar::from_padic(f.base, hensel_unit_root(ap, p, N));
  f.beta = ExtScalar::from_int(f.base, ap, N) - f.alpha;
  return f;
}

Frobenius Frobenius::good_supersingular(i64 p, i64 ap, int N) {
  if (ap % p != 0) throw DomainError("supersingular reduction needs p | a_p");
  Frobenius f;
  f.reduction = Reduction::good_supersingular;
  f.base = ExtField{p, ap, 0};
  f.N = N;
  f.alpha = ExtScalar::alpha(f.base, N);
  f.beta = ExtScalar::from_int(f.base, ap, N) - f.alpha;
  return f;
}

Frobenius Frobenius::multiplicative(i64 p, bool split, int N) {
  Frobenius f;
  f.reduction = split ? Reduction::split : Reduction::nonsplit;
  f.base = ExtField{p, std::nullopt, 0};
  f.N = N;
  const i64 s = split ? 1 : -1;
  f.alpha = ExtScalar::from_int(f.base, s, N);
  f.beta = ExtScalar::from_int(f.base, s * p, N);
  return f;
}

Frobenius Frobenius::from_reduction(Reduction red, i64 p, i64 ap, int N) {
  switch (red) {
    case Reduction::good_ordinary: return good_ordinary(p, ap, N);
    case Reduction::good_supersingular: return good_supersingular(p, ap, N);
    case Reduction::split: return multiplicative(p, true, N);
    case Reduction::nonsplit: return multiplicative(p, false, N);
    case Reduction::additive: break;
  }
  throw ReductionMismatch("additive reduction at p has no allowable root");
}

ExtScalar Frobenius::euler_ratio() const {
  ExtScalar one = ExtScalar::from_int(base, 1, N);
  return (one - one / alpha) / (one - one / beta);
}

// ------------------------------------------------------------ series

ExtScalar InterpolationSeries::evaluate(const GammaCharacter& chi) const {
  if (level && chi.k > *level) throw LevelError("character does not factor through G_n");
  ExtField F = field.at_level(std::max(chi.k, field.m));
  int N = 1;
  for (const auto& x : c) N = std::max(N, x.abs_prec());
  ExtScalar z = ExtScalar::zeta_power(F, chi.k == 0 ? 0 : chi.j * ipow(chi.p, F.m - chi.k), N) -
                ExtScalar::from_int(F, 1, N);
  ExtScalar acc(F, N);
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) acc = acc * z + c[k].lift_to(F);
  return acc;
}

InterpolationSeries series_from_leading(const ExtScalar& value, int a,
                                        const std::vector<ExtScalar>& higher) {
  InterpolationSeries s;
  s.field = value.field();
  s.c.assign(a, ExtScalar(value.field(), value.abs_prec()));
  s.c.push_back(value);
  s.c.insert(s.c.end(), higher.begin(), higher.end());
  return s;
}

std::vector<ExtScalar> gamma_to_u_coeffs(const std::vector<ExtScalar>& g) {
  const std::size_t D = g.size();
  if (D == 0) return {};
  const ExtField& F = g[0].field();
  int N = 1;
  for (const auto& x : g) N = std::max(N, x.abs_prec());
  Modulus mod(F.p, N);
  // Pascal rows modulo p^N; row j holds C(j, i).
  std::vector<ExtScalar> out(D, ExtScalar(F, N));
  std::vector<i64> row{1};
  for (std::size_t j = 0; j < D; ++j) {
    for (std::size_t i = 0; i <= j; ++i)
      if (row[i]) out[i] += g[j] * Padic::from_int(F.p, row[i], N);
    std::vector<i64> next(row.size() + 1, 0);
    for (std::size_t i = 0; i < next.size(); ++i)
      next[i] = mod.add(i < row.size() ? row[i] : 0, i ? row[i - 1] : 0);
    row.swap(next);
  }
  return out;
}

// ------------------------------------------------------------ delta_n

namespace {

i64 gamma_lift(i64 p, i64 j, int K) {
  Modulus mod(p, K);
  i64 g = 1 % mod.q(), b = 1 + p;
  for (i64 e = j; e > 0; e >>= 1) {
    if (e & 1) g = mod.mul(g, b);
    b = mod.mul(b, b);
  }
  return g;
}

// Sum over Gal(L(mu_{p^K}) / L_{K-1}), i.e. over the Teichmuller lifts.
ExtScalar trace_teichmuller(const ExtScalar& x, int K) {
  const i64 p = x.field().p;
  ExtScalar s(x.field(), x.abs_prec());
  for (i64 a = 1; a < p; ++a) s += galois_act(teichmuller(a, p, K).residue(K), x);
  return s;
}

}  // namespace

std::vector<ExtScalar> DeltaElement::orbit() const {
  const i64 p = frob.p();
  std::vector<ExtScalar> out;
  for (i64 j = 0; j < ipow(p, n); ++j) out.push_back(galois_act(gamma_lift(p, j, n + 1), coeff));
  return out;
}

DeltaElement delta_n(const Frobenius& frob, int n) {
  if (n < 0) throw LevelError("negative level");
  const i64 p = frob.p();
  const int N = frob.N;
  const ExtField F = frob.at_level(n + 1);
  const ExtScalar one = ExtScalar::from_int(F, 1, N);
  const ExtScalar alpha = frob.alpha.lift_to(F), beta = frob.beta.lift_to(F);
  const std::string where = "delta_" + std::to_string(n) + " at precision " + std::to_string(N);

  DeltaElement d;
  d.n = n;
  d.frob = frob;
  try {
    const ExtScalar tail = beta / (beta - one);
    ExtScalar first = tail, second = tail;
    for (int i = 0; i <= n; ++i) {
      ExtScalar z = ExtScalar::zeta_power(F, ipow(p, i), N);
      first += z * beta.pow(n + 1 - i);
      second += (z - one) / beta.pow(i);
    }
    d.coeff = trace_teichmuller(first, n + 1) / Padic::from_int(p, ipow(p, n + 1), N);
    d.coeff_second_form = trace_teichmuller(second, n + 1) / alpha.pow(n + 1);
  } catch (const DomainError& e) {
    // A power of alpha or beta is not invertible at this precision.
    throw PrecisionLoss(where + ": " + e.what());
  }
  // Both forms have valuation at least -(n+1); at or below that nothing is known.
  if (std::min(d.coeff.abs_prec(), d.coeff_second_form.abs_prec()) <= -(n + 1))
    throw PrecisionLoss(where + ": no significant digits remain");
  if (!d.coeff.eq(d.coeff_second_form))
    throw std::logic_error("the two expressions for delta_n disagree");
  return d;
}

ExtScalar delta_trace_down(const DeltaElement& d) {
  if (d.n < 1) throw LevelError("delta_0 has no lower level");
  return cyclo_trace(d.coeff, d.n);
}

ExtScalar delta_character_sum(const DeltaElement& d, const GammaCharacter& chi) {
  if (chi.k > d.n) throw LevelError("character does not factor through G_n");
  const i64 p = d.frob.p();
  const i64 stride = chi.k == 0 ? 0 : ipow(p, d.n + 1 - chi.k);
  const i64 ord = ipow(p, d.n + 1);
  auto orb = d.orbit();
  ExtScalar s(d.coeff.field(), d.coeff.abs_prec());
  for (std::size_t j = 0; j < orb.size(); ++j) {
    i64 e = static_cast<i64>((static_cast<i128>(stride) * chi.j % ord * static_cast<i64>(j)) % ord);
    s += orb[j].mul_zeta(e);
  }
  return s;
}

ExtScalar delta_character_expected(const Frobenius& frob, const GammaCharacter& chi, int level) {
  ExtField F = frob.at_level(level);
  if (chi.trivial()) return frob.euler_ratio().lift_to(F);
  const int m = chi.conductor_exp();
  return gauss_sum(chi, F, frob.N) / frob.alpha.lift_to(F).pow(m);
}

// ------------------------------------------------------------ symbol tables

i64 ModularSymbolTable::hecke_ap() const {
  if (ap.empty()) throw ValidationError("table carries no a_p");
  return ap.front();
}

Rational ModularSymbolTable::value(int m, i64 a) const {
  auto lv = levels.find(m);
  if (lv == levels.end()) throw ValidationError("level " + std::to_string(m) + " missing");
  i64 q = ipow(p, m);
  i64 r = ((a % q) + q) % q;
  auto it = lv->second.find(r);
  if (it == lv->second.end())
    throw ValidationError("symbol [" + std::to_string(r) + "/" + std::to_string(q) + "] missing");
  return it->second;
}

void validate_table(const ModularSymbolTable& t) {
  if (t.levels.empty()) throw ValidationError("empty table");
  for (int m = 0; m <= t.depth(); ++m)
    for (i64 a = 0; a < ipow(t.p, m); ++a) (void)t.value(m, a);
  for (int m = 1; m <= t.depth(); ++m)
    for (i64 b = 0; b < ipow(t.p, m - 1); ++b)
      if (t.value(m, t.p * b) != t.value(m - 1, b))
        throw ValidationError("periodicity fails at m=" + std::to_string(m) + " a=" + std::to_string(t.p * b));
  const Rational ap = t.hecke_ap();
  for (int m = 0; m < t.depth(); ++m) {
    const i64 pm = ipow(t.p, m);
    for (i64 a = 0; a < pm; ++a) {
      Rational rhs = m == 0 ? t.value(0, 0) : t.value(m - 1, a);
      for (i64 k = 0; k < t.p; ++k) rhs += t.value(m + 1, a + k * pm);
      Rational lhs = ap * t.value(m, a);
      if (lhs != rhs)
        throw ValidationError("distribution relation fails at m=" + std::to_string(m) +
                              " a=" + std::to_string(a) + ": " + format_rational(lhs) +
                              " != " + format_rational(rhs));
    }
  }
}

ModularSymbolTable synthetic_table(i64 p, i64 ap, int depth, const Rational& value0,
                                   std::mt19937_64& rng) {
  ModularSymbolTable t;
  t.curve = "synthetic";
  t.p = p;
  t.ap = {ap};
  t.normalization = "synthetic";
  t.levels[0][0] = value0;
  std::uniform_int_distribution<int> draw_v(-6, 6);
  for (int m = 0; m < depth; ++m) {
    const i64 pm = ipow(p, m);
    auto& next = t.levels[m + 1];
    for (i64 a = 0; a < pm; ++a) {
      Rational target = Rational(ap) * t.value(m, a) - (m == 0 ? t.value(0, 0) : t.value(m - 1, a));
      std::vector<i64> free;
      for (i64 k = 0; k < p; ++k) {
        i64 x = a + k * pm;
        if (x % p == 0) {
          next[x] = t.value(m, x / p);
          target -= next[x];
        } else {
          free.push_back(x);
        }
      }
      if (free.empty()) continue;  // forced by the previous level
      for (std::size_t i = 0; i + 1 < free.size(); ++i) {
        Rational v(draw_v(rng), 1 + std::abs(draw_v(rng)) % 2 * 3);  // denominators 1 or 4
        next[free[i]] = v;
        target -= v;
      }
      next[free.back()] = target;
    }
  }
  return t;
}

ModularSymbolTable twist_table(const ModularSymbolTable& t, i64 b) {
  if (b % t.p == 0) throw DomainError("twist needs a unit");
  ModularSymbolTable out = t;
  for (auto& [m, vals] : out.levels)
    for (auto& [a, v] : vals) v = t.value(m, b * a);
  return out;
}

ModularSymbolTable synthetic_rank_table(i64 p, i64 ap, int depth, int rank, std::mt19937_64& rng) {
  if (rank < 0) throw DomainError("negative rank");
  ModularSymbolTable t = synthetic_table(p, ap, depth, rank == 0 ? Rational(1) : Rational(0), rng);
  for (int k = 1; k < rank; ++k) {
    ModularSymbolTable moved = twist_table(t, 1 + p);
    for (auto& [m, vals] : t.levels)
      for (auto& [a, v] : vals) v -= moved.levels.at(m).at(a);
  }
  return t;
}

ThetaElement theta_from_symbols(const ModularSymbolTable& t, int n, int M) {
  validate_table(t);
  if (t.depth() < n + 1) throw InsufficientDepth("theta_" + std::to_string(n) + " needs level " + std::to_string(n + 1));
  Ctx ctx = GroupRingCtx::get(t.p, n, M);
  std::vector<Rational> g(ctx->N(), Rational(0));
  const i64 q = ipow(t.p, n + 1);
  for (i64 a = 1; a < q; ++a) {
    if (a % t.p == 0) continue;
    g[sigma_exponent(a, ctx)] += t.value(n + 1, a);
  }
  int minv = 0;
  for (const auto& x : g)
    if (x != 0) minv = std::min(minv, rational_val(x, t.p));
  ThetaElement out;
  out.scale_exp = -minv;
  Vec gc(ctx->N());
  const Rational scale = pow(BigInt(t.p), out.scale_exp);
  for (int j = 0; j < ctx->N(); ++j) gc[j] = Padic::from_rational(t.p, g[j] * scale, M).residue(M);
  out.theta = GroupRingElement::from_gamma(ctx, gc);
  return out;
}

// ------------------------------------------------------------ measures

namespace {

ExtScalar rat(const ExtField& F, const Rational& x, int N) {
  return ExtScalar::from_padic(F, Padic::from_rational(F.p, x, N));
}

// mu(a + p^m Z_p) over the base field.
ExtScalar measure(const ModularSymbolTable& t, const Frobenius& frob, int m, i64 a,
                  const ExtScalar& inv_alpha) {
  const ExtField& F = frob.base;
  return inv_alpha.pow(m) * rat(F, t.value(m, a), frob.N) -
         inv_alpha.pow(m + 1) * rat(F, t.value(m - 1, a), frob.N);
}

}  // namespace

ExtScalar stabilized_partial_sum(const ModularSymbolTable& t, const Frobenius& frob,
                                 const GammaCharacter& chi, int m) {
  validate_table(t);
  if (m < std::max(1, chi.conductor_exp()))
    throw InsufficientDepth("Riemann sum level below the conductor");
  if (m > t.depth()) throw InsufficientDepth("table depth " + std::to_string(t.depth()) + " below level " + std::to_string(m));
  const i64 p = t.p;
  const ExtScalar inv_alpha = ExtScalar::from_int(frob.base, 1, frob.N) / frob.alpha;
  const i64 pk = ipow(p, chi.k);
  // Group the measure by chi's value first: chi(a) = zeta_{p^k}^{j e(a)}.
  std::vector<ExtScalar> bucket(pk, ExtScalar(frob.base, frob.N));
  for (i64 a = 1; a < ipow(p, m); ++a) {
    if (a % p == 0) continue;
    i64 e = chi.k == 0 ? 0 : (gamma_exponent(a, p, m) % pk) * chi.j % pk;
    bucket[e] += measure(t, frob, m, a, inv_alpha);
  }
  ExtField F = frob.at_level(chi.k);
  ExtScalar s(F, frob.N);
  for (i64 e = 0; e < pk; ++e) s += bucket[e].lift_to(F).mul_zeta(e);
  return s;
}

ExtScalar stabilized_measure_eval(const ModularSymbolTable& t, const Frobenius& frob,
                                  const GammaCharacter& chi) {
  return stabilized_partial_sum(t, frob, chi, t.depth());
}

InterpolationSeries stabilized_series(const ModularSymbolTable& t, const Frobenius& frob, int n) {
  validate_table(t);
  if (t.depth() < n + 1) throw InsufficientDepth("series at level " + std::to_string(n) + " needs table level " + std::to_string(n + 1));
  const i64 p = t.p, pn = ipow(p, n);
  const ExtScalar inv_alpha = ExtScalar::from_int(frob.base, 1, frob.N) / frob.alpha;
  std::vector<ExtScalar> g(pn, ExtScalar(frob.base, frob.N));
  for (i64 a = 1; a < p * pn; ++a) {
    if (a % p == 0) continue;
    g[gamma_exponent(a, p, n + 1) % pn] += measure(t, frob, n + 1, a, inv_alpha);
  }
  InterpolationSeries s;
  s.field = frob.base;
  s.c = gamma_to_u_coeffs(g);
  s.level = n;
  return s;
}

// ------------------------------------------------------------ leading terms

int expected_order(int r, Reduction red) {
  if (red == Reduction::additive) throw ReductionMismatch("no order of vanishing is predicted for additive reduction");
  return red == Reduction::split ? r + 1 : r;
}

LeadingTerm leading_term(const InterpolationSeries& s, int r, Reduction red) {
  const int a = expected_order(r, red);
  for (int i = 0; i < a && i < static_cast<int>(s.c.size()); ++i)
    if (!s.c[i].is_zero())
      throw OrderViolation(i, "coefficient of (gamma-1)^" + std::to_string(i) + " is nonzero");
  if (static_cast<int>(s.c.size()) <= a) throw InsufficientDepth("series truncated below degree " + std::to_string(a));
  return {s.c[a], a};
}

AugClass theta_leading_class(const GroupRingElement& theta, int r, Reduction red) {
  const int a = expected_order(r, red);
  AugOrder o = aug_order(theta, a);
  if (!o.top && o.order < a)
    throw OrderViolation(o.order, "theta lies in I^" + std::to_string(o.order) + " but not deeper");
  return quotient_class(theta, a);
}

// ------------------------------------------------------------ Rubin / BSD

ExtScalar rubin_residual(const KappaData& kappa, const PairingMatrix& m,
                         const std::vector<ExtScalar>& x_pairings, const ExtScalar& logx,
                         const Frobenius& frob, const LeadingTerm& lead) {
  m.validate();
  const int r = m.r;
  if (static_cast<int>(kappa.coords.size()) != r || static_cast<int>(x_pairings.size()) != r)
    throw DomainError("kappa and the point data need one entry per basis point");
  const int a = expected_order(r, frob.reduction);
  if (lead.degree != a)
    throw ReductionMismatch("leading term of degree " + std::to_string(lead.degree) + " for " +
                            to_string(frob.reduction) + " reduction needs degree " + std::to_string(a));
  const ExtField& F = m.field();
  const int N = frob.N;
  const ExtScalar one = ExtScalar::from_int(F, 1, N);
  if (frob.reduction != Reduction::split) {
    ExtScalar lhs(F, N);
    for (int i = 0; i < r; ++i) lhs += kappa.coords[i] * x_pairings[i];
    return lhs - logx * lead.value / frob.euler_ratio().lift_to(F);
  }
  if (!m.tate) throw MissingTateData("split multiplicative reduction needs Tate data");
  const ExtScalar lam = log_chi_gamma(F, N);
  ExtScalar lhs(F, N);
  for (int i = 0; i < r; ++i) {
    ExtScalar sch = x_pairings[i] - logx * m.logs[i] / (lam * m.tate->logq);
    lhs += kappa.coords[i] * sch;
  }
  lhs = lhs * l_invariant(m.tate, F, N).q1_coord;
  const ExtScalar euler_p = one - one / ExtScalar::from_int(F, F.p, N);
  return lhs - euler_p * logx * lead.value;
}

BsdPrediction padic_bsd_predict(const CurveInvariants& inv, const PairingMatrix& m,
                                const Frobenius& frob,
                                const std::optional<Rational>& beilinson_ratio) {
  m.validate();
  const ExtField& F = m.field();
  const int N = frob.N;
  const bool split = frob.reduction == Reduction::split;
  BsdPrediction out;
  out.degree = expected_order(m.r, frob.reduction);
  if (beilinson_ratio) {
    out.scalar = *beilinson_ratio;
  } else {
    out.scalar = inv.v_xi * inv.sha * inv.tam / (inv.tors * inv.tors);
    for (const auto& [ell, L] : inv.euler_factors)
      if (!(split && ell == F.p)) out.scalar *= L;
  }
  const ExtScalar s = rat(F, out.scalar, N);
  if (!split) {
    out.prefactor = frob.euler_ratio().lift_to(F);
    out.regulator = regulator_rp(m).value;
  } else {
    if (!m.tate) throw MissingTateData("split multiplicative reduction needs Tate data");
    const ExtScalar lam = log_chi_gamma(F, N);
    out.prefactor = l_invariant(m.tate, F, N).q1_coord;
    out.regulator = schneider(m).regulator / lam.pow(m.r);
  }
  out.value = out.prefactor * s * out.regulator;
  return out;
}

// ------------------------------------------------------------ Coleman map

std::vector<ColemanLevel> coleman_pair(const std::vector<ExtScalar>& dual_exp,
                                       const std::vector<DeltaElement>& deltas) {
  if (dual_exp.size() != deltas.size()) throw LevelMismatch("one surrogate per delta_n is required");
  std::vector<ColemanLevel> out;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const DeltaElement& d = deltas[i];
    const ExtScalar& e = dual_exp[i];
    if (!(e.field() == d.coeff.field()))
      throw LevelMismatch("surrogate " + std::to_string(i) + " lives at cyclotomic level " +
                          std::to_string(e.field().m) + ", delta_" + std::to_string(d.n) +
                          " at level " + std::to_string(d.n + 1));
    const i64 p = d.frob.p();
    for (i64 a = 1; a < p; ++a)
      if (!galois_act(teichmuller(a, p, d.n + 1).residue(d.n + 1), e).eq(e))
        throw DomainError("surrogate is not an element of L_n");
    ColemanLevel lv;
    lv.n = d.n;
    const Padic pm1 = Padic::from_int(p, p - 1, d.frob.N);
    for (const auto& sd : d.orbit()) lv.gamma_coeffs.push_back(cyclo_trace(e * sd, 0) / pm1);
    lv.series.field = d.frob.base;
    lv.series.c = gamma_to_u_coeffs(lv.gamma_coeffs);
    lv.series.level = d.n;
    out.push_back(std::move(lv));
  }
  return out;
}

}  // namespace eulerlab

#include "eulerlab/derivative.hpp"

#include <algorithm>

namespace eulerlab {

EulerElement corestrict(const EulerElement& z, const Ctx& lower) {
  EulerElement r{lower, {}};
  for (const auto& x : z.z) r.z.push_back(x.project(lower));
  return r;
}

GRVector darmon_norm(const EulerElement& z) {
  const Ctx& ctx = z.ctx;
  const int N = ctx->N();
  const Modulus& mod = ctx->mod();
  // Entry (t, m) collects coeff_{gamma^m}(gamma^j z_t) gamma^{-j} over j.
  std::vector<Vec> acc(z.rank() * N, Vec(N, 0));
  for (int t = 0; t < z.rank(); ++t) {
    for (int j = 0; j < N; ++j) {
      Vec g = (GroupRingElement::gamma_pow(ctx, j) * z.z[t]).gamma_coeffs();
      const int inv = (N - j) % N;
      for (int m = 0; m < N; ++m) {
        Vec& slot = acc[t * N + m];
        slot[inv] = mod.add(slot[inv], g[m]);
      }
    }
  }
  GRVector out;
  out.reserve(acc.size());
  for (auto& v : acc) out.push_back(GroupRingElement::from_gamma(ctx, v));
  return out;
}

EulerElement divide_by_u(const EulerElement& z, int a) {
  const Ctx& ctx = z.ctx;
  if (a == 0) return z;
  const int N = ctx->N();
  // Column k holds u^a * u^k.
  Mat A(N, Vec(N, 0));
  GroupRingElement col = GroupRingElement::u_pow(ctx, a);
  for (int k = 0; k < N; ++k) {
    for (int i = 0; i < N; ++i) A[i][k] = col.coeffs()[i];
    col = col.times_u();
  }
  EulerElement w{ctx, {}};
  for (int t = 0; t < z.rank(); ++t) {
    auto sol = solve(ctx->mod(), A, z.z[t].coeffs());
    if (!sol) {
      AugOrder o = aug_order(z.z[t], a);
      throw NotDivisible(t, o.order,
                         "coordinate " + std::to_string(t) + " is not divisible by (gamma-1)^" +
                             std::to_string(a) + " (aug_order " + std::to_string(o.order) + ")");
    }
    w.z.emplace_back(ctx, *sol);
  }
  return w;
}

namespace {

// Fills the level-dependent parts of a finite-level derivative from its
// scalars epsilon(w_t).
void fill_finite(DarmonDerivative& k) {
  const Ctx& ctx = k.ctx;
  k.level = ctx->n();
  k.p = ctx->p();
  k.M = ctx->M();
  k.coord_prec = quotient_order_exp(ctx, k.a);
  const i64 q = ipow(k.p, k.coord_prec);
  const GroupRingElement ua = GroupRingElement::u_pow(ctx, k.a);
  const GroupRingElement norm = GroupRingElement::norm_element(ctx);
  k.base.clear();
  k.classes.clear();
  k.coords.clear();
  for (i64 s : k.base_scalars) {
    k.base.push_back(norm * s);
    k.classes.push_back(quotient_class(ua * s, k.a));
    k.coords.push_back(((s % q) + q) % q);
  }
}

bool equal_mod(const Vec& x, const Vec& y, i64 q) {
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if ((x[i] - y[i]) % q != 0) return false;
  return true;
}

}  // namespace

bool DarmonDerivative::same_class(const DarmonDerivative& o) const {
  if (lambda != o.lambda || a != o.a || p != o.p) return false;
  if (!lambda) return level == o.level && classes == o.classes;
  return equal_mod(coords, o.coords, ipow(p, std::min(coord_prec, o.coord_prec)));
}

DarmonDerivative derivative_from_witness(const EulerElement& w, int a) {
  DarmonDerivative k;
  k.ctx = w.ctx;
  k.a = a;
  for (const auto& x : w.z) k.base_scalars.push_back(x.augmentation());
  fill_finite(k);
  return k;
}

DarmonDerivative darmon_derivative(const EulerElement& z, int a) {
  return derivative_from_witness(divide_by_u(z, a), a);
}

DarmonDerivative project_derivative(const DarmonDerivative& k, const Ctx& lower) {
  if (k.lambda) throw LevelError("projection of a Lambda-level derivative");
  if (lower->p() != k.p || lower->M() != k.M || lower->n() > k.level)
    throw LevelError("projection target must be a lower level with the same p and M");
  DarmonDerivative r = k;
  r.ctx = lower;
  fill_finite(r);
  return r;
}

DarmonDerivative iwasawa_limit(const std::vector<DarmonDerivative>& tower) {
  if (tower.empty()) throw DomainError("empty tower");
  for (std::size_t i = 1; i < tower.size(); ++i) {
    const auto& lo = tower[i - 1];
    const auto& hi = tower[i];
    if (hi.lambda || lo.lambda || hi.level <= lo.level || hi.a != lo.a)
      throw IncompatibleTower("tower levels must increase with a common degree");
    if (!project_derivative(hi, lo.ctx).same_class(lo))
      throw IncompatibleTower("level " + std::to_string(hi.level) +
                              " does not project to level " + std::to_string(lo.level));
  }
  const DarmonDerivative& top = tower.back();
  DarmonDerivative r;
  r.lambda = true;
  r.p = top.p;
  r.M = top.M;
  r.level = top.level;
  r.a = top.a;
  r.base_scalars = top.base_scalars;
  r.coords = top.coords;
  r.coord_prec = top.coord_prec;
  for (i64 c : r.coords) {
    AugClass cl;
    cl.lambda = true;
    cl.degree = r.a;
    cl.coord = c;
    r.classes.push_back(cl);
  }
  return r;
}

DarmonDerivative lambda_derivative(const std::vector<IwasawaTrunc>& z, int a) {
  DarmonDerivative r;
  r.lambda = true;
  r.a = a;
  for (std::size_t t = 0; t < z.size(); ++t) {
    const auto& x = z[t];
    if (t == 0) {
      r.p = x.p();
      r.M = x.M();
      r.coord_prec = x.M();
    }
    if (a >= x.D()) throw PrecisionError("degree beyond the u-adic truncation");
    for (int k = 0; k < a; ++k)
      if (x.coeffs()[k]) throw NotDivisible(static_cast<int>(t), k, "coordinate " + std::to_string(t) +
                                            " is not divisible by (gamma-1)^" + std::to_string(a));
    r.base_scalars.push_back(x.coeffs()[a]);
    r.coords.push_back(x.coeffs()[a]);
    r.classes.push_back(quotient_class(x, a));
  }
  return r;
}

ObstructionCertificate fitting_obstruction_check(const EulerElement& z,
                                                 const ModuleMap& presentation) {
  const Ctx& ctx = z.ctx;
  ObstructionCertificate cert;
  const IdealZ fitt = fitting0(presentation);
  for (int i = 0; i < z.rank(); ++i) {
    if (!fitt.contains(z.z[i])) {
      cert.fitting_hypothesis = false;
      cert.violating_index = i;
      break;
    }
  }

  // Coinvariants of the H^2 model: its level-0 presentation over Z/p^M.
  const Ctx base = GroupRingCtx::get(ctx->p(), 0, ctx->M());
  ModuleMap low = presentation.project(base);
  Mat A(low.rows(), Vec(low.cols(), 0));
  for (int i = 0; i < low.rows(); ++i)
    for (int j = 0; j < low.cols(); ++j) A[i][j] = low.m[i][j].augmentation();
  int torsion_slots = 0;
  if (low.rows() > 0 && low.cols() > 0) {
    for (int e : smith(ctx->mod(), A).exps) {
      if (e < ctx->M()) {
        ++torsion_slots;
        cert.tors_exp += e;
      }
    }
  }
  // An invariant factor p^M is indistinguishable from 0 here and is counted
  // as free.
  cert.a = low.rows() - torsion_slots;

  const IdealZ target =
      IdealZ::aug_power(ctx, cert.a) *
          IdealZ::generated(ctx, {GroupRingElement::scalar(ctx, ipow(ctx->p(), cert.tors_exp))}) +
      IdealZ::aug_power(ctx, cert.a + 1);
  cert.fitting_inclusion = target.contains(fitt);
  if (!cert.fitting_hypothesis) return cert;

  GRVector nz = darmon_norm(z);
  cert.norm_membership = true;
  for (std::size_t i = 0; i < nz.size(); ++i) {
    if (!target.contains(nz[i])) {
      cert.norm_membership = false;
      cert.failing_norm_entry = static_cast<int>(i);
      break;
    }
  }
  return cert;
}

PPowerResult p_power_obstruction(const Vec& kappa, int c, const Mat& h0_gens, const Modulus& mod) {
  if (c < 0 || c > mod.M()) throw DomainError("quotient exponent out of range");
  const int h = static_cast<int>(kappa.size());
  const i64 p = mod.p();
  PPowerResult r;
  Vec y(kappa.size());
  for (int i = 0; i < h; ++i) y[i] = mod.red(kappa[i]);

  // Row space of h0_gens is H_0. With U A V = D, y lies in H_0 + p^c P_0 iff
  // every coordinate of y V is divisible by p^min(d_i, c).
  std::vector<int> d(h, mod.M());
  Mat V = identity(h);
  if (!h0_gens.empty()) {
    SmithForm S = smith(mod, h0_gens);
    V = S.V;
    for (std::size_t i = 0; i < S.exps.size(); ++i) d[i] = S.exps[i];
  }
  Vec yv(h, 0);
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < h; ++i) yv[j] = mod.add(yv[j], mod.mul(y[i], V[i][j]));
  for (int j = 0; j < h; ++j) {
    int need = std::min(d[j], c);
    int have = std::min(mod.val(yv[j]), c);
    r.e = std::max(r.e, need - have);
  }

  auto in_span = [&](const Vec& v, int k) {
    Mat gens = h0_gens;
    for (int i = 0; i < h; ++i) {
      Vec row(h, 0);
      row[i] = mod.red(ipow(p, k));
      gens.push_back(row);
    }
    return Lattice::span(mod, h, gens).contains(v);
  };
  r.e_bruteforce = c;
  for (int e = 0; e <= c; ++e) {
    Vec v = y;
    for (auto& x : v) x = mod.mul(x, mod.red(ipow(p, e)));
    if (in_span(v, c)) {
      r.e_bruteforce = e;
      break;
    }
  }
  r.mod_p_member = in_span(y, 1);
  return r;
}

}  // namespace eulerlab

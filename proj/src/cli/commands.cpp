#include "eulerlab/cli/commands.hpp"

#include <random>

#include "eulerlab/bockstein.hpp"
#include "eulerlab/cli/suites.hpp"

namespace eulerlab::cli {

namespace {

Json flags_json(const Flags& f) {
  Json j;
  if (f.p) j["p"] = std::to_string(*f.p);
  j["prec"] = std::to_string(f.prec);
  j["level"] = std::to_string(f.level);
  return j;
}

void stamp(Report& rep, const std::string& command, const Flags& f, const Json& files) {
  rep.command = command;
  rep.seed = f.seed;
  rep.parameters = flags_json(f);
  rep.inputs_digest = inputs_digest(command, rep.parameters, files);
}

// Input files fix the prime; a --p that disagrees is a usage error.
void check_prime(const Flags& f, i64 file_p) {
  if (f.p && *f.p != file_p)
    throw SchemaError("--p " + std::to_string(*f.p) + " disagrees with p = " + std::to_string(file_p) + " in the input file");
}

Json order_json(const AugOrder& o) {
  Json j;
  j["order"] = std::to_string(o.order);
  j["top"] = o.top;
  j["precision_limited"] = o.precision_limited;
  return j;
}

Json prediction_json(const BsdPrediction& b) {
  Json j;
  j["value"] = to_json(b.value);
  j["degree"] = std::to_string(b.degree);
  j["prefactor"] = to_json(b.prefactor);
  j["regulator"] = to_json(b.regulator);
  j["scalar"] = to_json(b.scalar);
  return j;
}

}  // namespace

Report cmd_darmon(const Json& element, const Flags& f) {
  Report rep;
  stamp(rep, "darmon", f, element);
  ElementFile e = parse_element(element, f.prec);
  check_prime(f, e.ctx->p());
  const Ctx& ctx = e.ctx;
  rep.data["p"] = std::to_string(ctx->p());
  rep.data["n"] = std::to_string(ctx->n());
  rep.data["prec"] = std::to_string(ctx->M());
  rep.data["a"] = std::to_string(e.a);

  Json orders = Json::array();
  for (const auto& x : e.z.z) orders.push_back(order_json(aug_order(x, e.a)));
  rep.data["aug_order"] = orders;

  DarmonDerivative k;
  try {
    k = darmon_derivative(e.z, e.a);
  } catch (const NotDivisible& err) {
    Json v;
    v["coordinate"] = std::to_string(err.coord());
    v["aug_order"] = std::to_string(err.aug_order());
    v["message"] = err.what();
    rep.expect("z is divisible by (gamma-1)^a", false, "Darmon derivative: z = (gamma-1)^a w for some w", v);
    return rep;
  }
  rep.expect("z is divisible by (gamma-1)^a", true, "");

  Json kappa;
  Json base = Json::array();
  for (const auto& b : k.base) base.push_back(to_json(b));
  kappa["norm_of_witness"] = base;
  kappa["base_scalars"] = to_json(k.base_scalars);
  Json classes = Json::array();
  for (const auto& c : k.classes) classes.push_back(to_json(c));
  kappa["classes"] = classes;
  kappa["coords"] = to_json(k.coords);
  kappa["coord_prec"] = std::to_string(k.coord_prec);
  rep.data["kappa"] = kappa;

  // (gamma-1) kills the norm element, so adding multiples of it gives a
  // second witness; the normal form must not see the difference.
  EulerElement w = divide_by_u(e.z, e.a);
  if (e.a > 0)
    for (int t = 0; t < w.rank(); ++t) w.z[t] = w.z[t] + GroupRingElement::norm_element(ctx) * (t + 1);
  rep.expect("kappa is independent of the division witness", derivative_from_witness(w, e.a).same_class(k),
             "Darmon derivative: the class of Norm(w) (gamma-1)^a does not depend on w");
  if (e.a == 0) {
    bool ok = true;
    for (int t = 0; t < e.z.rank(); ++t)
      ok = ok && (k.base[t] - GroupRingElement::norm_element(ctx) * e.z.z[t]).is_zero();
    rep.expect("a = 0 gives kappa = Norm(z)", ok, "Darmon derivative at a = 0 is the norm");
  }

  if (e.h0) {
    PPowerResult r = p_power_obstruction(k.coords, k.coord_prec, *e.h0, ctx->mod());
    Json v;
    v["e"] = std::to_string(r.e);
    v["e_bruteforce"] = std::to_string(r.e_bruteforce);
    v["mod_p_member"] = r.mod_p_member;
    rep.data["obstruction"] = v;
    rep.expect("obstruction exponent", r.e == r.e_bruteforce,
               "p-power obstruction: minimal e with p^e kappa in H_0 (x) Q^a", v);
  }
  return rep;
}

Report cmd_theta(const Json& table, const Flags& f) {
  Report rep;
  stamp(rep, "theta", f, table);
  ModularSymbolTable t = parse_table(table);
  check_prime(f, t.p);
  validate_table(t);
  rep.expect("Hecke distribution relation", true, "");
  const int n = f.level;
  const int M = f.prec > 0 ? f.prec : std::min(10, default_prec(t.p));
  const i64 ap = t.hecke_ap();
  Reduction red = ap % t.p == 0 ? Reduction::good_supersingular : Reduction::good_ordinary;
  if (table.contains("reduction")) {
    if (!table["reduction"].is_string()) throw SchemaError("table.reduction: expected a string");
    red = parse_reduction(table["reduction"].get<std::string>());
  }
  std::optional<int> rank;
  if (table.contains("rank")) rank = static_cast<int>(get_int(table, "rank", "table"));
  std::string mode = "none";
  if (table.contains("alpha_mode")) {
    if (!table["alpha_mode"].is_string()) throw SchemaError("table.alpha_mode: expected a string");
    mode = table["alpha_mode"].get<std::string>();
    if (mode != "none" && mode != "stabilized")
      throw SchemaError("table.alpha_mode: expected \"none\" or \"stabilized\"");
  }

  ThetaElement th = theta_from_symbols(t, n, M);
  rep.data["curve"] = t.curve;
  rep.data["normalization"] = t.normalization;
  rep.data["n"] = std::to_string(n);
  rep.data["prec"] = std::to_string(M);
  rep.data["theta"] = to_json(th.theta);
  rep.data["scale_exp"] = std::to_string(th.scale_exp);

  const int want = rank ? expected_order(*rank, red) : 0;
  const int a_max = std::max(want + 1, 3);
  AugOrder o = aug_order(th.theta, a_max);
  rep.data["aug_order"] = order_json(o);
  if (!o.top) {
    AugClass c = quotient_class(th.theta, o.order);
    auto [coord, e] = class_coordinate(th.theta, o.order);
    Json lead = to_json(c);
    lead["coordinate"] = std::to_string(coord);
    lead["quotient_exp"] = std::to_string(e);
    rep.data["leading"] = lead;
  }
  if (rank) {
    Check c;
    c.name = "theta vanishing order";
    c.value = order_json(o);
    try {
      theta_leading_class(th.theta, *rank, red);
      c.status = o.precision_limited && !o.top ? Status::precision_limited : Status::pass;
    } catch (const OrderViolation& err) {
      c.status = Status::fail;
      c.identity = "Mazur-Tate elements lie in I^r for a rank r curve";
      c.value["violation"] = err.what();
    }
    rep.add(c);
  }

  if (mode == "stabilized") {
    Frobenius frob = Frobenius::from_reduction(red, t.p, ap, M);
    InterpolationSeries s = stabilized_series(t, frob, n);
    Json cs = Json::array();
    for (const auto& x : s.c) cs.push_back(to_json(x));
    rep.data["stabilized_series"] = cs;
    if (rank && want >= 1)
      rep.expect("stabilized series at the trivial character", s.c.at(0).is_zero(),
                 "the interpolation series vanishes at chi = 1 when r >= 1", to_json(s.c.at(0)),
                 s.c.at(0).abs_prec());
    if (rank) {
      try {
        LeadingTerm lt = leading_term(s, *rank, red);
        Json v;
        v["value"] = to_json(lt.value);
        v["degree"] = std::to_string(lt.degree);
        rep.expect("stabilized series vanishing order", true, "", v, lt.value.abs_prec());
      } catch (const OrderViolation& err) {
        // A level-n representative of an element of I^r can carry nonzero
        // (gamma-1)^k coefficients for 0 < k < r of valuation >= n, so
        // only the constant term gives an exact verdict.
        Check c;
        c.name = "stabilized series vanishing order";
        Json v;
        v["first_nonzero"] = std::to_string(err.index());
        v["valuation"] = std::to_string(s.c.at(err.index()).val());
        c.value = v;
        c.status = err.index() == 0 ? Status::fail : Status::precision_limited;
        if (err.index() == 0) c.identity = "the alpha-stabilized series vanishes to order r (r+1 when split)";
        rep.add(c);
      } catch (const InsufficientDepth& err) {
        Check c;
        c.name = "stabilized series vanishing order";
        c.value = err.what();
        c.status = Status::precision_limited;
        rep.add(c);
      }
    }
  }
  return rep;
}

Report cmd_bsd(const Json& curve, const Flags& f) {
  Report rep;
  stamp(rep, "bsd", f, curve);
  CurveFile c = parse_curve(curve, f.prec);
  check_prime(f, c.p);
  if (!c.leading_ratio) throw SchemaError("curve.leading_ratio: missing field (required by bsd)");
  rep.data["p"] = std::to_string(c.p);
  rep.data["r"] = std::to_string(c.r);
  rep.data["reduction"] = to_string(c.reduction);
  rep.data["prec"] = std::to_string(c.prec);

  EtaReport eta = eta_elements(c.pairing, c.invariants, *c.leading_ratio);
  Json cmp;
  cmp["analytic"] = to_json(eta.analytic);
  cmp["algebraic"] = to_json(eta.algebraic);
  cmp["val_analytic"] = std::to_string(eta.val_analytic);
  cmp["val_algebraic"] = std::to_string(eta.val_algebraic);
  cmp["valuation_gap"] = std::to_string(eta.val_analytic - eta.val_algebraic);
  cmp["scalars_equal"] = eta.scalars_equal;
  rep.data["eta"] = cmp;
  rep.data["eta_bsd"] = to_json(eta.eta_bsd);
  rep.data["eta_alg"] = to_json(eta.eta_alg);
  rep.expect("eta lattices agree", eta.lattices_equal,
             "p-part of BSD: eta^BSD and eta^alg span the same Z_p-lattice", cmp);

  rep.data["prediction_algebraic"] = prediction_json(padic_bsd_predict(c.invariants, c.pairing, c.frob));
  rep.data["prediction_analytic"] =
      prediction_json(padic_bsd_predict(c.invariants, c.pairing, c.frob, c.leading_ratio));
  if (c.pairing.tate) {
    LInvariant L = l_invariant(c.pairing.tate, c.frob.base, c.prec);
    Json l;
    l["value"] = to_json(L.value);
    l["q1_coord"] = to_json(L.q1_coord);
    rep.data["l_invariant"] = l;
  }
  return rep;
}

Report cmd_regulator(const Json& curve, const Flags& f) {
  Report rep;
  stamp(rep, "regulator", f, curve);
  CurveFile c = parse_curve(curve, f.prec);
  check_prime(f, c.p);
  const PairingMatrix& m = c.pairing;
  const ExtField& F = m.field();
  Filtered rp = regulator_rp(m);
  rep.data["R_p"] = to_json(rp.value);
  rep.data["R_p_degree"] = std::to_string(rp.degree);
  BocRegulator boc = boc_regulator(m);
  Json coords = Json::array();
  for (const auto& x : boc.coords) coords.push_back(to_json(x));
  rep.data["R_boc"] = coords;
  rep.data["R_boc_degree"] = std::to_string(boc.degree);

  std::mt19937_64 rng(f.seed);
  int fails = 0;
  const int trials = 8;
  for (int t = 0; t < trials; ++t) {
    std::vector<ExtScalar> pair(m.r, ExtScalar(F, c.prec));
    ExtScalar logx(F, c.prec);
    for (int j = 0; j < m.r; ++j) {
      ExtScalar s = ExtScalar::from_int(F, static_cast<i64>(draw(rng, 61)) - 30, c.prec);
      logx += s * m.logs[j];
      for (int i = 0; i < m.r; ++i) pair[i] += s * m.h[j][i];
    }
    if (!reg_prop_residual(m, pair, logx).is_zero()) ++fails;
    if (m.tate && !reg_prop2_residual(m, pair, logx).is_zero()) ++fails;
  }
  Json v;
  v["points"] = std::to_string(trials);
  v["failures"] = std::to_string(fails);
  rep.expect("height identity on the span", fails == 0, "<x, R^Boc> = log_omega(x) R_p for x in the span", v);

  if (m.tate) {
    SchneiderResult s = schneider(m);
    rep.data["R_schneider"] = to_json(s.regulator);
    rep.expect("Schneider closed form", s.regulator.eq(s.closed_form),
               "entrywise-corrected determinant = R_p - log_omega(R^Boc)/log_p(q_E)", to_json(s.closed_form),
               s.regulator.abs_prec());
  }
  return rep;
}

Report cmd_delta_check(const std::optional<Json>& curve, const Flags& f) {
  Report rep;
  stamp(rep, "delta-check", f, curve ? *curve : Json::object());
  std::vector<Frobenius> frobs;
  i64 p = f.p.value_or(3);
  int N = f.prec > 0 ? f.prec : (p == 3 ? 18 : std::min(12, default_prec(p)));
  if (curve) {
    CurveFile c = parse_curve(*curve, f.prec > 0 ? f.prec : 0);
    check_prime(f, c.p);
    p = c.p;
    N = c.prec;
    frobs.push_back(c.frob);
  } else {
    frobs = delta_samples(p, N);
  }
  rep.data["p"] = std::to_string(p);
  rep.data["prec"] = std::to_string(N);
  Json values = Json::array();
  for (const Frobenius& fr : frobs) {
    std::string label = to_string(fr.reduction);
    if (fr.base.ap) label += " ap=" + std::to_string(*fr.base.ap);
    std::optional<DeltaElement> prev;
    for (int n = 0; n <= f.level; ++n) {
      const std::string at = label + " n=" + std::to_string(n);
      DeltaElement d = delta_n(fr, n);
      Json entry;
      entry["frobenius"] = label;
      entry["n"] = std::to_string(n);
      entry["delta"] = to_json(d.coeff);
      values.push_back(entry);
      rep.expect("forms agree: " + at, d.coeff.eq(d.coeff_second_form),
                 "delta_n: the two displayed expressions coincide", nullptr, d.coeff.abs_prec());
      GammaCharacter one{p, 0, 0};
      rep.expect("trivial character: " + at,
                 delta_character_sum(d, one).eq(fr.euler_ratio().lift_to(d.coeff.field())),
                 "delta_n at chi = 1 equals (1 - 1/alpha)(1 - 1/beta)^{-1}");
      bool cond_ok = true;
      for (int k = 1; k <= n; ++k)
        for (const auto& chi : characters_of_exact_level(p, k))
          cond_ok = cond_ok && delta_character_sum(d, chi).eq(delta_character_expected(fr, chi, n + 1));
      if (n > 0)
        rep.expect("conductor characters: " + at, cond_ok,
                   "delta_n at chi of conductor p^m equals tau(chi)/alpha^m");
      if (prev)
        rep.expect("trace: " + at, delta_trace_down(d).eq(prev->coeff), "Tr_{L_n/L_{n-1}} delta_n = delta_{n-1}");
      prev = d;
    }
  }
  rep.data["delta"] = values;
  return rep;
}

Report cmd_descent_check(const Flags& f) {
  Report rep;
  stamp(rep, "descent-check", f, Json::object());
  const i64 p = f.p.value_or(3);
  const int M = f.prec > 0 ? f.prec : 8;
  const Ctx ctx = GroupRingCtx::get(p, f.level, M);
  const int D = ctx->nilpotency();
  std::mt19937_64 rng(f.seed);
  Json cases = Json::array();
  for (int d = 1; d <= 4; ++d)
    for (int r = 1; r <= std::min(d, 3); ++r) {
      const i64 tors = d > r ? p : 1;
      SynthInstance s = synth_generate(p, M, D, d, r, rng(), IwasawaTrunc::scalar(p, M, D, tors));
      TwoTermComplex C = s.complex.at_level(ctx);
      Vec sc(ctx->N());
      for (auto& x : sc) x = static_cast<i64>(draw(rng, ctx->mod().q()));
      DescentResult res = descent_commutes(C, DetElement{GroupRingElement(ctx, sc)});
      Json c;
      c["d"] = std::to_string(d);
      c["r"] = std::to_string(r);
      c["tors"] = std::to_string(tors);
      Json left = Json::array(), right = Json::array();
      for (const auto& k : res.left.classes) left.push_back(to_json(k));
      for (const auto& k : res.right.classes) right.push_back(to_json(k));
      c["upper_path"] = left;
      c["lower_path"] = right;
      cases.push_back(c);
      rep.expect("descent diagram d=" + std::to_string(d) + " r=" + std::to_string(r), res.residual.is_zero(),
                 "descent diagram: N_n(Pi_n(z)) = Boc_{n,x}(Pi_x(N_n(z)))");
    }
  rep.data["cases"] = cases;
  return rep;
}

}  // namespace eulerlab::cli

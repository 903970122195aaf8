#include <random>

#include "doctest.h"
#include "eulerlab/heights.hpp"
#include "eulerlab/linalg.hpp"
#include "oracles.hpp"

using namespace eulerlab;

namespace {

constexpr int kN = 20;
using EMat = std::vector<std::vector<ExtScalar>>;

ExtScalar ext_int(const ExtField& F, i64 x) { return ExtScalar::from_int(F, x, kN); }

ExtScalar random_scalar(const ExtField& F, std::mt19937_64& rng) {
  std::uniform_int_distribution<i64> d(-40, 40);
  ExtScalar x = ext_int(F, d(rng));
  if (F.ap) x += ExtScalar::alpha(F, kN) * ext_int(F, d(rng));
  return x;
}

PairingMatrix random_pairing(const ExtField& F, int r, std::mt19937_64& rng) {
  PairingMatrix m;
  m.r = r;
  m.h.assign(r, std::vector<ExtScalar>(r, ext_int(F, 0)));
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j) m.h[i][j] = m.h[j][i] = random_scalar(F, rng);
  for (int i = 0; i < r; ++i) m.logs.push_back(random_scalar(F, rng));
  return m;
}

ExtScalar oracle_det(const EMat& A, const ExtField& F) {
  return oracle::leibniz(A, ext_int(F, 0), ext_int(F, 1));
}

// Column i of h replaced by the logs, determinant by permutation expansion.
ExtScalar oracle_cofactor(const PairingMatrix& m, int i) {
  EMat rep = m.h;
  for (int k = 0; k < m.r; ++k) rep[k][i] = m.logs[k];
  return oracle_det(rep, m.field());
}

const ExtField kOrd{7, std::nullopt, 0};
const ExtField kSS{7, 0, 0};

}  // namespace

TEST_CASE("regulator_rp small cases and the permutation oracle") {
  std::mt19937_64 rng(11);
  PairingMatrix one = random_pairing(kOrd, 1, rng);
  CHECK(regulator_rp(one).value.eq(one.h[0][0]));
  CHECK(regulator_rp(one).degree == 1);

  PairingMatrix diag = random_pairing(kOrd, 3, rng);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) diag.h[i][j] = ext_int(kOrd, 0);
  CHECK(regulator_rp(diag).value.eq(diag.h[0][0] * diag.h[1][1] * diag.h[2][2]));

  for (const ExtField& F : {kOrd, kSS})
    for (int trial = 0; trial < 20; ++trial) {
      PairingMatrix m = random_pairing(F, 3, rng);
      CHECK(regulator_rp(m).value.eq(oracle_det(m.h, F)));
    }
}

TEST_CASE("pairing validation") {
  std::mt19937_64 rng(12);
  PairingMatrix m = random_pairing(kOrd, 2, rng);
  m.h[0][1] = m.h[0][1] + ext_int(kOrd, 1);
  CHECK_THROWS_AS(regulator_rp(m), SymmetryError);
  CHECK_THROWS_AS(boc_regulator(m), SymmetryError);
  PairingMatrix t = random_pairing(kOrd, 2, rng);
  t.tate = TateData{1, ext_int(kOrd, 0)};
  CHECK_THROWS_AS(regulator_rp(t), DomainError);
}

TEST_CASE("boc_regulator against column-replacement determinants") {
  std::mt19937_64 rng(13);
  PairingMatrix one = random_pairing(kOrd, 1, rng);
  auto b1 = boc_regulator(one);
  REQUIRE(b1.coords.size() == 1);
  CHECK(b1.coords[0].eq(one.logs[0]));
  CHECK(b1.degree == 0);

  PairingMatrix z = random_pairing(kOrd, 3, rng);
  for (auto& l : z.logs) l = ext_int(kOrd, 0);
  for (const auto& c : boc_regulator(z).coords) CHECK(c.is_zero());

  for (const ExtField& F : {kOrd, kSS})
    for (int r = 2; r <= 4; ++r)
      for (int trial = 0; trial < 10; ++trial) {
        PairingMatrix m = random_pairing(F, r, rng);
        auto b = boc_regulator(m);
        CHECK(b.degree == r - 1);
        for (int i = 0; i < r; ++i) CHECK(b.coords[i].eq(oracle_cofactor(m, i)));
      }
}

TEST_CASE("height identity for points in the span of the basis") {
  std::mt19937_64 rng(14);
  PairingMatrix one = random_pairing(kOrd, 1, rng);
  CHECK(reg_prop_residual(one, {one.h[0][0]}, one.logs[0]).is_zero());

  int checked = 0;
  for (const ExtField& F : {kOrd, kSS})
    for (int r = 1; r <= 4; ++r)
      for (int trial = 0; trial < 25; ++trial) {
        PairingMatrix m = random_pairing(F, r, rng);
        std::vector<ExtScalar> c;
        for (int i = 0; i < r; ++i) c.push_back(random_scalar(F, rng));
        std::vector<ExtScalar> pair(r, ext_int(F, 0));
        ExtScalar logx = ext_int(F, 0);
        for (int j = 0; j < r; ++j) {
          logx += c[j] * m.logs[j];
          for (int i = 0; i < r; ++i) pair[i] += c[j] * m.h[j][i];
        }
        CHECK(reg_prop_residual(m, pair, logx).is_zero());
        // Inconsistent data: shift log(x) by a unit while keeping the pairings.
        ExtScalar reg = regulator_rp(m).value;
        if (!reg.is_zero()) CHECK_FALSE(reg_prop_residual(m, pair, logx + ext_int(F, 1)).is_zero());
        ++checked;
      }
  CHECK(checked == 200);
}

TEST_CASE("Schneider regulator: entrywise determinant equals the closed form") {
  std::mt19937_64 rng(15);
  const ExtScalar lam = log_chi_gamma(kOrd, kN);
  CHECK(lam.eq(ExtScalar::from_padic(kOrd, log_p(Padic::from_int(7, 8, kN + 1), kN + 1)).with_prec(kN)));

  PairingMatrix no_tate = random_pairing(kOrd, 2, rng);
  CHECK_THROWS_AS(schneider(no_tate), MissingTateData);

  // Vanishing logs: R^Sch is the l_p image of R_p.
  PairingMatrix z = random_pairing(kOrd, 2, rng);
  for (auto& l : z.logs) l = ext_int(kOrd, 0);
  z.tate = tate_from_period(7, Rational(7 * 15), kN);
  auto sz = schneider(z);
  CHECK(sz.regulator.eq(lam * lam * regulator_rp(z).value));
  CHECK(sz.closed_form.eq(sz.regulator));

  PairingMatrix one = random_pairing(kOrd, 1, rng);
  one.tate = tate_from_period(7, Rational(49 * 8), kN);
  auto s1 = schneider(one);
  ExtScalar direct = lam * one.h[0][0] - one.logs[0] * one.logs[0] / one.tate->logq;
  CHECK(s1.regulator.eq(direct));
  CHECK(s1.closed_form.eq(direct));

  for (const ExtField& F : {kOrd, kSS})
    for (int r = 2; r <= 4; ++r)
      for (int trial = 0; trial < 10; ++trial) {
        PairingMatrix m = random_pairing(F, r, rng);
        TateData t = tate_from_period(7, Rational(7 * (1 + 7 * (trial + 1))), kN);
        t.logq = t.logq.lift_to(F);
        m.tate = t;
        auto s = schneider(m);
        CHECK(s.regulator.eq(s.closed_form));
        EMat a = m.h;
        for (auto& row : a)
          for (auto& x : row) x = lam.lift_to(F) * x;
        auto [lhs, rhs] = det_rank_one_update(a, m.logs, ext_int(F, -1) / t.logq, ext_int(F, 0),
                                              ext_int(F, 1));
        CHECK(lhs.eq(s.regulator));
        CHECK(rhs.eq(s.closed_form));

        // Schneider form of the height identity for x in the span.
        std::vector<ExtScalar> pair(r, ext_int(F, 0));
        ExtScalar logx = ext_int(F, 0);
        for (int j = 0; j < r; ++j) {
          ExtScalar c = random_scalar(F, rng);
          logx += c * m.logs[j];
          for (int i = 0; i < r; ++i) pair[i] += c * m.h[j][i];
        }
        CHECK(reg_prop2_residual(m, pair, logx).is_zero());
      }
}

TEST_CASE("L-invariant") {
  const int N = 15;
  TateData t5 = tate_from_period(5, Rational(30), N);
  CHECK(t5.vq == 1);
  Padic log6 = log_p(Padic::from_int(5, 6, N + 1), N + 1).with_prec(N);
  CHECK(t5.logq.coeff(0, 0).eq(log6));
  ExtField F5{5, std::nullopt, 0};
  auto L = l_invariant(t5, F5, N);
  CHECK(L.value.coeff(0, 0).eq(log6));
  CHECK((L.q1_coord * log_chi_gamma(F5, N)).eq(L.value));

  for (int k = 2; k <= 4; ++k) {
    TateData tk = tate_from_period(5, Rational(oracle::pw(30, k)), N);
    CHECK(tk.vq == k);
    CHECK(tk.logq.eq(t5.logq * ExtScalar::from_int(F5, k, N)));
    CHECK(l_invariant(tk, F5, N).value.eq(L.value));
  }
  CHECK_THROWS_AS(l_invariant(std::nullopt, F5, N), MissingTateData);
  CHECK_THROWS_AS(tate_from_period(5, Rational(6), N), DomainError);
}

TEST_CASE("boc_regulator under a change of basis") {
  std::mt19937_64 rng(16);
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_int_distribution<i64> mult(-3, 3);
  for (int trial = 0; trial < 40; ++trial) {
    const int r = 2 + trial % 3;
    PairingMatrix m = random_pairing(kOrd, r, rng);
    // Product of elementary integer matrices, then an optional unit scale.
    std::vector<std::vector<i64>> U(r, std::vector<i64>(r, 0));
    for (int i = 0; i < r; ++i) U[i][i] = 1;
    for (int step = 0; step < 6; ++step) {
      int a = pick(rng) % r, b = pick(rng) % r;
      if (a == b) continue;
      i64 k = mult(rng);
      for (int c = 0; c < r; ++c) U[a][c] += k * U[b][c];
    }
    const i64 scale = trial % 2 ? 1 : 3;  // 3 is a 7-adic unit
    for (int c = 0; c < r; ++c) U[0][c] *= scale;

    PairingMatrix m2 = m;
    for (int i = 0; i < r; ++i) {
      m2.logs[i] = ext_int(kOrd, 0);
      for (int k = 0; k < r; ++k) m2.logs[i] += ext_int(kOrd, U[i][k]) * m.logs[k];
      for (int j = 0; j < r; ++j) {
        m2.h[i][j] = ext_int(kOrd, 0);
        for (int k = 0; k < r; ++k)
          for (int l = 0; l < r; ++l) m2.h[i][j] += ext_int(kOrd, U[i][k] * U[j][l]) * m.h[k][l];
      }
    }
    auto b = boc_regulator(m).coords;
    auto b2 = boc_regulator(m2).coords;
    // Coefficient of x_j in sum_i b2_i x'_i, against det(U)^2 b_j.
    for (int j = 0; j < r; ++j) {
      ExtScalar back = ext_int(kOrd, 0);
      for (int i = 0; i < r; ++i) back += ext_int(kOrd, U[i][j]) * b2[i];
      CHECK(back.eq(ext_int(kOrd, scale * scale) * b[j]));
    }
    CHECK(regulator_rp(m2).value.eq(ext_int(kOrd, scale * scale) * regulator_rp(m).value));
  }
}

TEST_CASE("Birch and Swinnerton-Dyer elements") {
  std::mt19937_64 rng(17);
  PairingMatrix m = random_pairing(kOrd, 1, rng);
  CurveInvariants trivial;
  auto rep = eta_elements(m, trivial, Rational(1));
  CHECK(rep.algebraic == 1);
  CHECK(rep.scalars_equal);
  CHECK(rep.lattices_equal);
  CHECK(rep.eta_alg.eq(m.logs[0]));

  Rational ratio(14, 3);
  auto r1 = eta_elements(m, trivial, ratio);
  ExtScalar ratio_p = ExtScalar::from_padic(kOrd, Padic::from_rational(7, ratio, kN));
  CHECK(r1.eta_bsd.eq(ratio_p * m.logs[0]));
  CHECK(r1.boc_bsd.coords[0].eq(ratio_p * m.logs[0]));
  CHECK(r1.val_analytic == 1);
  CHECK_FALSE(r1.lattices_equal);

  CurveInvariants inv;
  inv.v_xi = 2;
  inv.sha = 49;
  inv.tam = 3;
  inv.tors = 2;
  inv.euler_factors = {{11, Rational(10, 11)}, {13, Rational(12, 13)}};
  PairingMatrix m3 = random_pairing(kOrd, 3, rng);
  const Rational expect = Rational(2 * 49 * 3, 4) * Rational(10, 11) * Rational(12, 13);
  auto r3 = eta_elements(m3, inv, expect);
  CHECK(r3.algebraic == expect);
  CHECK(r3.scalars_equal);
  CHECK(r3.val_algebraic == 2);
  auto boc = boc_regulator(m3).coords;
  ExtScalar s = ExtScalar::from_padic(kOrd, Padic::from_rational(7, expect, kN));
  for (int i = 0; i < 3; ++i) CHECK(r3.boc_alg.coords[i].eq(s * boc[i]));
  // Same valuation, different unit part: lattices agree, scalars do not.
  auto r4 = eta_elements(m3, inv, expect * 2);
  CHECK_FALSE(r4.scalars_equal);
  CHECK(r4.lattices_equal);
}

#pragma once
// Darmon norms and derivatives of elements of free Z/p^M[G_n]-modules,
// their Iwasawa limit, and the Fitting-ideal obstruction checks.
#include <optional>
#include <vector>

#include "eulerlab/linalg.hpp"

namespace eulerlab {

// z in a free module of rank h over Z/p^M[G_n], as coordinates.
struct EulerElement {
  Ctx ctx;
  GRVector z;
  int rank() const { return static_cast<int>(z.size()); }
};

// Corestriction to a lower level. On coordinates of a free module this is
// the projection Z/p^M[G_n] -> Z/p^M[G_n'].
EulerElement corestrict(const EulerElement& z, const Ctx& lower);

// N(z) = sum_sigma sigma(z) (x) sigma^{-1}. Entry [t * N + m] is the
// Z/p^M[G_n]-coefficient attached to the Z_p-basis vector e_t gamma^m.
GRVector darmon_norm(const EulerElement& z);

// Some w with u^a w = z. NotDivisible names the first failing coordinate.
EulerElement divide_by_u(const EulerElement& z, int a);

struct DarmonDerivative {
  bool lambda = false;
  Ctx ctx;                  // finite level only
  i64 p = 0;
  int M = 0;
  int level = 0;
  int a = 0;
  GRVector base;            // Norm(w) coordinatewise (finite level)
  Vec base_scalars;         // epsilon(w_t): coordinates of Norm(w) in H_0
  std::vector<AugClass> classes;  // class of epsilon(w_t) u^a in Q^a
  Vec coords;               // coordinate against u^a, one per t
  int coord_prec = 0;       // coords are determined modulo p^coord_prec

  // Normal-form equality (independent of the division witness).
  bool same_class(const DarmonDerivative& o) const;
};

DarmonDerivative darmon_derivative(const EulerElement& z, int a);
// Derivative built from an explicit division witness w (z = u^a w).
DarmonDerivative derivative_from_witness(const EulerElement& w, int a);

// Image of a level-n derivative at a lower level.
DarmonDerivative project_derivative(const DarmonDerivative& k, const Ctx& lower);

// Checks successive compatibility (tower[i] projects to tower[i-1]) and
// returns the Lambda-level coordinates, fixed modulo the top level's
// quotient order. IncompatibleTower names the first failing level.
DarmonDerivative iwasawa_limit(const std::vector<DarmonDerivative>& tower);

// Lambda-level derivative straight from coordinates in Lambda.
DarmonDerivative lambda_derivative(const std::vector<IwasawaTrunc>& z, int a);

struct ObstructionCertificate {
  bool fitting_hypothesis = true;  // coordinate ideal inside Fitt^0
  int violating_index = -1;        // first coordinate outside Fitt^0
  int a = 0;                       // Z_p-rank of the level-0 module
  int tors_exp = 0;                // #tors = p^tors_exp at level 0
  bool fitting_inclusion = false;  // Fitt^0 inside #tors I^a + I^{a+1}
  bool norm_membership = false;    // N(z) in P (x) (#tors I^a + I^{a+1})
  int failing_norm_entry = -1;
};

// z is given by its coordinates in the free module P; `presentation`
// presents the H^2 model (rows = generators, columns = relations).
ObstructionCertificate fitting_obstruction_check(const EulerElement& z,
                                                 const ModuleMap& presentation);

struct PPowerResult {
  int e = 0;                // minimal e with p^e kappa in H_0 (x) Q^a
  int e_bruteforce = 0;     // the same by direct search
  bool mod_p_member = false;  // kappa mod p lies in the image of H_0
};

// kappa: coordinates in P_0 (x) Q^a with Q^a = Z/p^c. h0_gens: generators of
// H_0 inside P_0 = Z_p^h, entries mod p^M.
PPowerResult p_power_obstruction(const Vec& kappa, int c, const Mat& h0_gens, const Modulus& mod);

}  // namespace eulerlab

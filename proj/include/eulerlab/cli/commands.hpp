#pragma once
// The subcommands other than `suite`. Each takes parsed input and flag
// values and returns a report; library errors propagate to the caller.
#include <optional>

#include "eulerlab/cli/io.hpp"
#include "eulerlab/cli/report.hpp"

namespace eulerlab::cli {

struct Flags {
  std::optional<i64> p;
  int prec = 0;  // 0: per-command default
  int level = 1;
  std::uint64_t seed = 1;
};

// Darmon derivative of an element file: kappa's normal form, the aug_order
// certificate of every coordinate and, with h0 present, the p-power
// obstruction exponent.
Report cmd_darmon(const Json& element, const Flags& f);
// theta_n of a symbol table (n = f.level). Optional table fields: "rank",
// "reduction", and "alpha_mode" ("none" or "stabilized").
Report cmd_theta(const Json& table, const Flags& f);
// eta^BSD against eta^alg, the p-adic BSD prediction and the L-invariant.
Report cmd_bsd(const Json& curve, const Flags& f);
// R_p, the Bockstein regulator, Schneider's regulator and the height
// identity on seeded points of the span.
Report cmd_regulator(const Json& curve, const Flags& f);
// delta_n identities for p = f.p (default 3) at levels up to f.level; with
// a curve file only its Frobenius is checked.
Report cmd_delta_check(const std::optional<Json>& curve, const Flags& f);
// The descent diagram on one seeded synthetic complex per shape (d, r).
Report cmd_descent_check(const Flags& f);

}  // namespace eulerlab::cli

#pragma once
// Input files: symbol tables, curve data and Euler-element files.
// Malformed input raises SchemaError naming the field path, or the line
// and column for unparsable JSON.
#include <optional>
#include <string>

#include "eulerlab/cli/report.hpp"
#include "eulerlab/derivative.hpp"
#include "eulerlab/lfunction.hpp"

namespace eulerlab::cli {

Json read_json_file(const std::string& path);
Json parse_json_text(const std::string& text);

// Integers may be JSON integers or digit strings; rationals may also be
// "num/den" strings. Floating-point numbers are rejected.
i64 get_int(const Json& obj, const std::string& key, const std::string& path);
Rational get_rational(const Json& obj, const std::string& key, const std::string& path);
Rational as_rational(const Json& v, const std::string& path);

// Largest precision <= 16 for which p^(prec+2) stays in machine range.
int default_prec(i64 p);

// {curve, p, ap: [..], normalization?, levels: [{m, values: [{a, plus}]}]}.
ModularSymbolTable parse_table(const Json& j);
Json table_to_json(const ModularSymbolTable& t);

struct CurveFile {
  i64 p = 0;
  int r = 0;
  i64 ap = 0;
  Reduction reduction = Reduction::good_ordinary;
  int prec = 0;
  Frobenius frob;
  PairingMatrix pairing;
  CurveInvariants invariants;
  std::optional<Rational> leading_ratio;
};
// {p, r, ap, reduction, heights, logs, tate?: {vq, logq} | {q}, sha, tam,
//  tors, v_xi, euler_factors?: {"ell": "num/den"}, leading_ratio?}.
// prec = 0 selects default_prec(p).
CurveFile parse_curve(const Json& j, int prec);

struct ElementFile {
  Ctx ctx;
  int a = 0;
  EulerElement z;
  std::optional<Mat> h0;  // generators of H_0 inside Z_p^h
};
// {p, n, prec, a, z: [[gamma coefficients]..], h0?: [[..]..]}. A nonzero
// prec argument overrides the file.
ElementFile parse_element(const Json& j, int prec);

}  // namespace eulerlab::cli

#include "eulerlab/cli/io.hpp"

#include <cmath>
#include <limits>
#include <fstream>
#include <sstream>

namespace eulerlab::cli {

namespace {

const Json& field(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "." + key + ": missing field");
  return *it;
}

const Json& array_field(const Json& obj, const std::string& key, const std::string& path) {
  const Json& v = field(obj, key, path);
  if (!v.is_array()) throw SchemaError(path + "." + key + ": expected an array");
  return v;
}

i64 as_int(const Json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<i64>();
  if (v.is_string()) {
    Rational q = parse_rational(v.get<std::string>());
    if (denominator(q) != 1) throw SchemaError(path + ": expected an integer");
    BigInt n = numerator(q);
    if (n > BigInt(std::numeric_limits<i64>::max()) || n < BigInt(std::numeric_limits<i64>::min()))
      throw SchemaError(path + ": integer out of range");
    return static_cast<i64>(n);
  }
  throw SchemaError(path + ": expected an integer (floats are not accepted)");
}

std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

}  // namespace

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SchemaError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": malformed JSON");
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

Rational as_rational(const Json& v, const std::string& path) {
  if (v.is_number_integer()) return Rational(v.get<i64>());
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const SchemaError& e) {
      throw SchemaError(path + ": " + e.what());
    }
  }
  throw SchemaError(path + ": expected an integer or \"num/den\" string (floats are not accepted)");
}

i64 get_int(const Json& obj, const std::string& key, const std::string& path) {
  return as_int(field(obj, key, path), path + "." + key);
}

Rational get_rational(const Json& obj, const std::string& key, const std::string& path) {
  return as_rational(field(obj, key, path), path + "." + key);
}

int default_prec(i64 p) {
  int k = 0;
  long double lim = std::ldexp(1.0L, 61);
  long double q = static_cast<long double>(p) * p;
  while (k < 16 && q * p <= lim) {
    q *= p;
    ++k;
  }
  return k;
}

ModularSymbolTable parse_table(const Json& j) {
  const std::string root = "table";
  ModularSymbolTable t;
  t.p = get_int(j, "p", root);
  if (j.contains("curve")) {
    if (!j["curve"].is_string()) throw SchemaError("table.curve: expected a string");
    t.curve = j["curve"].get<std::string>();
  }
  if (j.contains("normalization")) {
    if (!j["normalization"].is_string()) throw SchemaError("table.normalization: expected a string");
    t.normalization = j["normalization"].get<std::string>();
  }
  const Json& ap = array_field(j, "ap", root);
  if (ap.empty()) throw SchemaError("table.ap: at least a_p is required");
  for (std::size_t i = 0; i < ap.size(); ++i) t.ap.push_back(as_int(ap[i], idx("table.ap", i)));
  const Json& levels = array_field(j, "levels", root);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const std::string lp = idx("table.levels", i);
    int m = static_cast<int>(get_int(levels[i], "m", lp));
    if (m < 0) throw SchemaError(lp + ".m: negative level");
    if (t.levels.count(m)) throw SchemaError(lp + ".m: level " + std::to_string(m) + " repeated");
    auto& vals = t.levels[m];
    const Json& vs = array_field(levels[i], "values", lp);
    for (std::size_t k = 0; k < vs.size(); ++k) {
      const std::string vp = idx(lp + ".values", k);
      i64 a = get_int(vs[k], "a", vp);
      if (!vals.emplace(a, get_rational(vs[k], "plus", vp)).second)
        throw SchemaError(vp + ".a: residue " + std::to_string(a) + " repeated");
    }
  }
  return t;
}

Json table_to_json(const ModularSymbolTable& t) {
  Json j;
  j["schema"] = kSchema;
  j["curve"] = t.curve;
  j["p"] = t.p;
  Json ap = Json::array();
  for (i64 x : t.ap) ap.push_back(x);
  j["ap"] = ap;
  j["normalization"] = t.normalization;
  Json levels = Json::array();
  for (const auto& [m, vals] : t.levels) {
    Json l;
    l["m"] = m;
    Json vs = Json::array();
    for (const auto& [a, v] : vals) {
      Json e;
      e["a"] = a;
      e["plus"] = format_rational(v);
      vs.push_back(std::move(e));
    }
    l["values"] = std::move(vs);
    levels.push_back(std::move(l));
  }
  j["levels"] = std::move(levels);
  return j;
}

CurveFile parse_curve(const Json& j, int prec) {
  const std::string root = "curve";
  CurveFile c;
  c.p = get_int(j, "p", root);
  if (c.p < 3) throw SchemaError("curve.p: expected an odd prime");
  c.r = static_cast<int>(get_int(j, "r", root));
  if (c.r < 1) throw SchemaError("curve.r: rank must be positive");
  c.ap = get_int(j, "ap", root);
  const Json& red = field(j, "reduction", root);
  if (!red.is_string()) throw SchemaError("curve.reduction: expected a string");
  try {
    c.reduction = parse_reduction(red.get<std::string>());
  } catch (const Error& e) {
    throw SchemaError(std::string("curve.reduction: ") + e.what());
  }
  c.prec = prec > 0 ? prec : default_prec(c.p);
  c.frob = Frobenius::from_reduction(c.reduction, c.p, c.ap, c.prec);
  const ExtField F = c.frob.base;
  auto embed = [&](const Rational& x) {
    return ExtScalar::from_padic(F, Padic::from_rational(c.p, x, c.prec));
  };

  const Json& h = array_field(j, "heights", root);
  if (static_cast<int>(h.size()) != c.r) throw SchemaError("curve.heights: expected r rows");
  c.pairing.r = c.r;
  for (int i = 0; i < c.r; ++i) {
    const std::string rp = idx("curve.heights", i);
    if (!h[i].is_array() || static_cast<int>(h[i].size()) != c.r)
      throw SchemaError(rp + ": expected r entries");
    std::vector<ExtScalar> row;
    for (int k = 0; k < c.r; ++k) row.push_back(embed(as_rational(h[i][k], idx(rp, k))));
    c.pairing.h.push_back(std::move(row));
  }
  const Json& logs = array_field(j, "logs", root);
  if (static_cast<int>(logs.size()) != c.r) throw SchemaError("curve.logs: expected r entries");
  for (int i = 0; i < c.r; ++i) c.pairing.logs.push_back(embed(as_rational(logs[i], idx("curve.logs", i))));

  if (j.contains("tate")) {
    const Json& t = j["tate"];
    TateData td;
    if (t.contains("q")) {
      td = tate_from_period(c.p, get_rational(t, "q", "curve.tate"), c.prec);
      td.logq = td.logq.lift_to(F);
    } else {
      td.vq = static_cast<int>(get_int(t, "vq", "curve.tate"));
      td.logq = embed(get_rational(t, "logq", "curve.tate"));
    }
    c.pairing.tate = td;
  }
  try {
    c.pairing.validate();
  } catch (const Error& e) {
    throw SchemaError(std::string("curve.heights: ") + e.what());
  }

  auto opt_rational = [&](const char* key, Rational dflt) {
    return j.contains(key) ? get_rational(j, key, root) : dflt;
  };
  c.invariants.v_xi = opt_rational("v_xi", 1);
  c.invariants.sha = opt_rational("sha", 1);
  c.invariants.tam = opt_rational("tam", 1);
  c.invariants.tors = opt_rational("tors", 1);
  if (c.invariants.tors == 0) throw SchemaError("curve.tors: must be nonzero");
  if (j.contains("euler_factors")) {
    const Json& ef = j["euler_factors"];
    if (!ef.is_object()) throw SchemaError("curve.euler_factors: expected an object");
    for (auto it = ef.begin(); it != ef.end(); ++it) {
      const std::string ep = "curve.euler_factors." + it.key();
      Rational ell = parse_rational(it.key());
      if (denominator(ell) != 1 || ell < 2) throw SchemaError(ep + ": key must be a prime");
      c.invariants.euler_factors[static_cast<i64>(numerator(ell))] = as_rational(it.value(), ep);
    }
  }
  if (j.contains("leading_ratio")) c.leading_ratio = get_rational(j, "leading_ratio", root);
  return c;
}

ElementFile parse_element(const Json& j, int prec) {
  const std::string root = "element";
  ElementFile e;
  i64 p = get_int(j, "p", root);
  int n = static_cast<int>(get_int(j, "n", root));
  int M = prec > 0 ? prec : static_cast<int>(get_int(j, "prec", root));
  if (p < 3 || n < 0 || M < 1) throw SchemaError("element: need p >= 3, n >= 0, prec >= 1");
  e.ctx = GroupRingCtx::get(p, n, M);
  e.a = static_cast<int>(get_int(j, "a", root));
  if (e.a < 0) throw SchemaError("element.a: negative exponent");
  const Json& z = array_field(j, "z", root);
  if (z.empty()) throw SchemaError("element.z: empty element");
  e.z.ctx = e.ctx;
  const Modulus& mod = e.ctx->mod();
  for (std::size_t t = 0; t < z.size(); ++t) {
    const std::string zp = idx("element.z", t);
    if (!z[t].is_array() || static_cast<int>(z[t].size()) != e.ctx->N())
      throw SchemaError(zp + ": expected p^n gamma coefficients");
    Vec g;
    for (std::size_t k = 0; k < z[t].size(); ++k) g.push_back(mod.red(as_int(z[t][k], idx(zp, k))));
    e.z.z.push_back(GroupRingElement::from_gamma(e.ctx, g));
  }
  if (j.contains("h0")) {
    const Json& h = j["h0"];
    if (!h.is_array()) throw SchemaError("element.h0: expected an array of rows");
    Mat m;
    for (std::size_t i = 0; i < h.size(); ++i) {
      const std::string hp = idx("element.h0", i);
      if (!h[i].is_array() || h[i].size() != z.size()) throw SchemaError(hp + ": expected one entry per coordinate");
      Vec row;
      for (std::size_t k = 0; k < h[i].size(); ++k) row.push_back(mod.red(as_int(h[i][k], idx(hp, k))));
      m.push_back(row);
    }
    e.h0 = m;
  }
  return e;
}

}  // namespace eulerlab::cli

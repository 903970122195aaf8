// Regenerates the synthetic input fixtures. Usage: make_fixtures <dir>.
// Expected reports are produced separately by running the CLI on them.
#include <fstream>
#include <iostream>
#include <random>

#include "eulerlab/cli/io.hpp"

using namespace eulerlab;
using namespace eulerlab::cli;

namespace {

void save(const std::string& path, const Json& j) {
  std::ofstream f(path, std::ios::binary);
  f << j.dump(2) << "\n";
}

Json element_json(const EulerElement& z, int a, const std::optional<Mat>& h0) {
  Json j;
  j["schema"] = kSchema;
  j["p"] = z.ctx->p();
  j["n"] = z.ctx->n();
  j["prec"] = z.ctx->M();
  j["a"] = a;
  Json zs = Json::array();
  for (const auto& x : z.z) {
    Json row = Json::array();
    for (i64 c : x.gamma_coeffs()) row.push_back(c);
    zs.push_back(row);
  }
  j["z"] = zs;
  if (h0) {
    Json h = Json::array();
    for (const auto& r : *h0) {
      Json row = Json::array();
      for (i64 c : r) row.push_back(c);
      h.push_back(row);
    }
    j["h0"] = h;
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <dir>\n";
    return 2;
  }
  const std::string dir = argv[1];
  std::mt19937_64 rng(20240611);

  // Symbol tables: rank 1 at p = 3 (a_p = 2) and a copy with one value moved.
  ModularSymbolTable t = synthetic_rank_table(3, 2, 3, 1, rng);
  t.curve = "synthetic-rank1-p3";
  t.normalization = "synthetic: values are already divided by the period";
  Json tj = table_to_json(t);
  tj["rank"] = 1;
  save(dir + "/table_rank1_p3.json", tj);
  Json bad = tj;
  Rational v = parse_rational(bad["levels"][3]["values"][4]["plus"].get<std::string>());
  bad["levels"][3]["values"][4]["plus"] = format_rational(v + 1);
  bad["curve"] = "synthetic-rank1-p3-corrupted";
  save(dir + "/table_rank1_p3_corrupted.json", bad);

  ModularSymbolTable t2 = synthetic_rank_table(5, -1, 3, 2, rng);
  t2.curve = "synthetic-rank2-p5";
  t2.normalization = "synthetic: values are already divided by the period";
  Json t2j = table_to_json(t2);
  t2j["rank"] = 2;
  t2j["alpha_mode"] = "stabilized";
  save(dir + "/table_rank2_p5.json", t2j);

  // Euler elements z = (gamma - 1)^a w at p = 3, n = 2, M = 6.
  Ctx ctx = GroupRingCtx::get(3, 2, 6);
  auto random_el = [&] {
    Vec c(ctx->N());
    for (auto& x : c) x = static_cast<i64>(draw(rng, ctx->mod().q()));
    return GroupRingElement(ctx, c);
  };
  EulerElement z{ctx, {}};
  for (int k = 0; k < 2; ++k) z.z.push_back(GroupRingElement::u_pow(ctx, 1) * random_el());
  save(dir + "/element_divisible_a1.json", element_json(z, 1, Mat{{3, 0}, {0, 1}}));
  EulerElement z0{ctx, {random_el(), random_el()}};
  save(dir + "/element_a0.json", element_json(z0, 0, std::nullopt));
  EulerElement nd{ctx, {GroupRingElement::scalar(ctx, 1), random_el()}};
  save(dir + "/element_not_divisible.json", element_json(nd, 1, std::nullopt));
  return 0;
}

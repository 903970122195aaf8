// Command-line front end. Reports go to --out or stdout as JSON.
// Exit status: 0 when no check fails, 1 when a check fails, 2 on errors.
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "eulerlab/cli/commands.hpp"
#include "eulerlab/cli/suites.hpp"

using namespace eulerlab;
using namespace eulerlab::cli;

namespace {

struct Args {
  std::optional<i64> p;
  int prec = 0;
  int level = -1;
  std::uint64_t seed = 1;
  std::string suite;
  std::string out;
  std::string file;
};

void write(const Json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw SchemaError(out + ": cannot write file");
  f << text;
}

Flags flags_of(const Args& a, int default_level) {
  Flags f;
  f.p = a.p;
  f.prec = a.prec;
  f.level = a.level >= 0 ? a.level : default_level;
  f.seed = a.seed;
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checks for Euler systems, Bockstein regulators and p-adic L-functions"};
  app.require_subcommand(1);
  Args a;
  auto common = [&a](CLI::App* sc) {
    sc->add_option("--p", a.p, "prime p");
    sc->add_option("--prec", a.prec, "working precision M (0 picks a default)");
    sc->add_option("--level", a.level, "level n of G_n");
    sc->add_option("--seed", a.seed, "random seed");
    sc->add_option("--out", a.out, "write the report to this file");
  };
  auto* suite = app.add_subcommand("suite", "run a named property suite");
  common(suite);
  suite->add_option("--suite", a.suite, "suite name")->required();
  auto* darmon = app.add_subcommand("darmon", "Darmon derivative of an element file");
  common(darmon);
  darmon->add_option("file", a.file, "element JSON")->required();
  auto* theta = app.add_subcommand("theta", "Mazur-Tate element of a symbol table");
  common(theta);
  theta->add_option("file", a.file, "symbol table JSON")->required();
  auto* bsd = app.add_subcommand("bsd", "BSD elements and p-adic BSD prediction of a curve file");
  common(bsd);
  bsd->add_option("file", a.file, "curve JSON")->required();
  auto* reg = app.add_subcommand("regulator", "regulators of a curve file");
  common(reg);
  reg->add_option("file", a.file, "curve JSON")->required();
  auto* delta = app.add_subcommand("delta-check", "identities of the Coleman elements delta_n");
  common(delta);
  delta->add_option("file", a.file, "optional curve JSON selecting a_p and the reduction type");
  auto* descent = app.add_subcommand("descent-check", "descent diagram on synthetic complexes");
  common(descent);

  CLI11_PARSE(app, argc, argv);

  std::string command = app.get_subcommands().front()->get_name();
  try {
    Report rep;
    if (suite->parsed()) {
      SuiteOptions o;
      o.p = a.p.value_or(3);
      o.prec = a.prec;
      o.level = a.level >= 0 ? a.level : 2;
      o.seed = a.seed;
      rep = run_suite(a.suite, o);
    } else if (darmon->parsed()) {
      rep = cmd_darmon(read_json_file(a.file), flags_of(a, 0));
    } else if (theta->parsed()) {
      rep = cmd_theta(read_json_file(a.file), flags_of(a, 1));
    } else if (bsd->parsed()) {
      rep = cmd_bsd(read_json_file(a.file), flags_of(a, 0));
    } else if (reg->parsed()) {
      rep = cmd_regulator(read_json_file(a.file), flags_of(a, 0));
    } else if (delta->parsed()) {
      std::optional<Json> curve;
      if (!a.file.empty()) curve = read_json_file(a.file);
      rep = cmd_delta_check(curve, flags_of(a, 2));
    } else {
      rep = cmd_descent_check(flags_of(a, 1));
    }
    write(rep.to_json(), a.out);
    return rep.any_failed() ? 1 : 0;
  } catch (const Error& e) {
    Json j;
    j["schema"] = kSchema;
    j["version"] = kVersion;
    j["command"] = command;
    j["status"] = "error";
    j["error"] = {{"kind", e.kind()}, {"message", e.what()}};
    std::cerr << e.what() << "\n";
    try {
      write(j, a.out);
    } catch (const Error&) {
    }
    return 2;
  }
}

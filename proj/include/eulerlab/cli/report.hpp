#pragma once
// Machine-readable reports shared by every subcommand.
//
// Values are serialized as digit strings or "num/den" rationals, never as
// floating point. Key order is fixed by insertion, so a report is a pure
// function of its inputs and seed.
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eulerlab/groupring.hpp"
#include "json.hpp"

namespace eulerlab::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "eulerlab/1";
inline constexpr const char* kVersion = "0.1.0";

enum class Status { pass, fail, precision_limited };
std::string to_string(Status s);

struct Check {
  std::string name;
  Json value;                   // null when the check carries no value
  std::optional<int> abs_prec;  // p-adic precision of the value, if any
  Status status = Status::pass;
  std::string identity;         // the identity a failure falsifies
};

struct Report {
  std::string command;
  Json parameters = Json::object();
  std::string inputs_digest;
  std::uint64_t seed = 0;
  std::vector<Check> results;
  Json data = Json::object();

  void add(Check c) { results.push_back(std::move(c)); }
  // Appends a pass/fail check; `identity` is kept only on failure.
  void expect(const std::string& name, bool ok, const std::string& identity, Json value = nullptr,
              std::optional<int> abs_prec = std::nullopt);
  bool any_failed() const;
  Json to_json() const;
};

// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& bytes);
// Digest of the command, its parameters and the parsed input files.
std::string inputs_digest(const std::string& command, const Json& parameters, const Json& files);

Json to_json(const Rational& x);
Json to_json(const Padic& x);
Json to_json(const ExtScalar& x);
// Coefficients on gamma^j, 0 <= j < p^n, as residues mod p^M.
Json to_json(const GroupRingElement& x);
Json to_json(const AugClass& c);
Json to_json(const Vec& v);

}  // namespace eulerlab::cli

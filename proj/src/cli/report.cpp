#include "eulerlab/cli/report.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>

namespace eulerlab::cli {

std::string to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::precision_limited:
      return "precision-limited";
  }
  return "fail";
}

void Report::expect(const std::string& name, bool ok, const std::string& identity, Json value,
                    std::optional<int> abs_prec) {
  Check c;
  c.name = name;
  c.value = std::move(value);
  c.abs_prec = abs_prec;
  c.status = ok ? Status::pass : Status::fail;
  if (!ok) c.identity = identity;
  results.push_back(std::move(c));
}

bool Report::any_failed() const {
  for (const auto& c : results)
    if (c.status == Status::fail) return true;
  return false;
}

Json Report::to_json() const {
  Json j;
  j["schema"] = kSchema;
  j["version"] = kVersion;
  j["command"] = command;
  j["parameters"] = parameters;
  j["inputs_digest"] = inputs_digest;
  j["seed"] = std::to_string(seed);
  Json rs = Json::array();
  for (const auto& c : results) {
    Json r;
    r["name"] = c.name;
    r["status"] = cli::to_string(c.status);
    if (!c.value.is_null()) r["value"] = c.value;
    if (c.abs_prec) r["abs_prec"] = std::to_string(*c.abs_prec);
    if (!c.identity.empty()) r["identity"] = c.identity;
    rs.push_back(std::move(r));
  }
  j["results"] = std::move(rs);
  if (!data.empty()) j["data"] = data;
  j["status"] = any_failed() ? "fail" : "pass";
  return j;
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

std::string inputs_digest(const std::string& command, const Json& parameters, const Json& files) {
  Json j;
  j["command"] = command;
  j["parameters"] = parameters;
  j["files"] = files;
  return sha256_hex(j.dump());
}

Json to_json(const Rational& x) { return format_rational(x); }

Json to_json(const Padic& x) { return x.str(); }

Json to_json(const ExtScalar& x) {
  Json j;
  const ExtField& F = x.field();
  j["p"] = std::to_string(F.p);
  if (F.ap) j["ap"] = std::to_string(*F.ap);
  j["level"] = std::to_string(F.m);
  Json cs = Json::array();
  for (const auto& c : x.coeffs()) cs.push_back(c.str());
  j["coords"] = std::move(cs);
  j["abs_prec"] = std::to_string(x.abs_prec());
  return j;
}

Json to_json(const Vec& v) {
  Json a = Json::array();
  for (i64 x : v) a.push_back(std::to_string(x));
  return a;
}

Json to_json(const GroupRingElement& x) { return to_json(x.gamma_coeffs()); }

Json to_json(const AugClass& c) {
  Json j;
  j["degree"] = std::to_string(c.degree);
  if (c.lambda) {
    j["coord"] = std::to_string(c.coord);
  } else {
    j["level"] = std::to_string(c.level);
    j["normal_form"] = to_json(c.nf);
  }
  return j;
}

}  // namespace eulerlab::cli

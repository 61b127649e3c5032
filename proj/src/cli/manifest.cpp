#include "phasespace/cli/manifest.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <openssl/evp.h>

#include "json.hpp"
#include "phasespace/error.hpp"

namespace phasespace::cli {

namespace {

using nlohmann::json;

// JSON has no NaN; null stands for "not applicable".
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double as_double(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

const json& section(const json& j, const char* key) {
  const json& s = j.at(key);
  if (!s.is_object()) throw Error(ErrorCode::ParseError, std::string("manifest: '") + key + "' must be an object");
  return s;
}

template <typename T>
void read_if(const json& obj, const char* key, T& dest) {
  if (obj.contains(key)) dest = obj.at(key).get<T>();
}

}  // namespace

std::string to_json(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["state_spec"] = m.state_spec;
  j["grid"] = {{"q_min", m.grid.q_min}, {"q_max", m.grid.q_max}, {"n", m.grid.n}};
  j["constants"] = {{"hbar", m.constants.hbar}, {"mass", m.constants.mass}};
  j["potential"] = m.potential;
  json evo = {{"dt", m.evolution.dt}, {"steps", m.evolution.steps}};
  evo["truncation"] = m.evolution.truncation ? json(*m.evolution.truncation) : json(nullptr);
  j["evolution"] = evo;
  json tol = json::object();
  for (const auto& [name, value] : m.tolerances) tol[name] = number(value);
  j["tolerances"] = tol;
  json outs = json::array();
  for (const auto& o : m.outputs) outs.push_back({{"path", o.path}, {"sha256", o.sha256}});
  j["outputs"] = outs;
  json checks = json::array();
  for (const auto& c : m.checks) {
    checks.push_back({{"name", c.name}, {"status", c.status}, {"residual", number(c.residual)}});
  }
  j["checks"] = checks;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(std::string_view text) {
  RunManifest m;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "manifest must be a JSON object");
    read_if(j, "command", m.command);
    read_if(j, "state_spec", m.state_spec);
    if (j.contains("grid")) {
      const auto& g = section(j, "grid");
      read_if(g, "q_min", m.grid.q_min);
      read_if(g, "q_max", m.grid.q_max);
      read_if(g, "n", m.grid.n);
    }
    if (j.contains("constants")) {
      const auto& c = section(j, "constants");
      read_if(c, "hbar", m.constants.hbar);
      read_if(c, "mass", m.constants.mass);
    }
    read_if(j, "potential", m.potential);
    if (j.contains("evolution")) {
      const auto& e = section(j, "evolution");
      read_if(e, "dt", m.evolution.dt);
      read_if(e, "steps", m.evolution.steps);
      if (e.contains("truncation") && !e.at("truncation").is_null()) {
        m.evolution.truncation = e.at("truncation").get<std::size_t>();
      }
    }
    if (j.contains("tolerances")) {
      for (const auto& [name, value] : section(j, "tolerances").items()) m.tolerances[name] = as_double(value);
    }
    if (j.contains("outputs")) {
      for (const auto& o : j.at("outputs")) {
        m.outputs.push_back({o.at("path").get<std::string>(), o.at("sha256").get<std::string>()});
      }
    }
    if (j.contains("checks")) {
      for (const auto& c : j.at("checks")) {
        m.checks.push_back({c.at("name").get<std::string>(), c.at("status").get<std::string>(),
                            as_double(c.at("residual"))});
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("manifest: ") + e.what());
  }
  return m;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::InvalidConfig, "SHA-256 failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

}  // namespace phasespace::cli

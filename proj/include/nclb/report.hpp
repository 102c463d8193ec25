#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace nclb {

struct CheckLine {
  std::string id;
  std::string status;  // pass | fail | skip
  std::string witness;
  double elapsed_ms = 0.0;
};

struct SuiteOutcome {
  std::string suite;
  std::vector<CheckLine> checks;

  bool all_ok() const {
    for (const auto& c : checks)
      if (c.status == "fail") return false;
    return true;
  }
};

struct RunReport {
  std::string preset;
  std::uint64_t seed = 0;
  std::vector<SuiteOutcome> suites;

  bool all_ok() const {
    for (const auto& s : suites)
      if (!s.all_ok()) return false;
    return true;
  }
};

// Timing is reported in the human-readable output only; the JSON form must
// be byte-identical across runs with the same seed.
inline nlohmann::ordered_json report_json(const RunReport& r) {
  nlohmann::ordered_json out;
  out["version"] = "0.1.0";
  out["preset"] = r.preset;
  out["seed"] = r.seed;
  out["suites"] = nlohmann::ordered_json::array();
  for (const SuiteOutcome& s : r.suites) {
    nlohmann::ordered_json js;
    js["suite"] = s.suite;
    js["checks"] = nlohmann::ordered_json::array();
    for (const CheckLine& c : s.checks) {
      nlohmann::ordered_json jc;
      jc["id"] = c.id;
      jc["status"] = c.status;
      jc["witness"] = c.witness;
      js["checks"].push_back(std::move(jc));
    }
    out["suites"].push_back(std::move(js));
  }
  return out;
}

inline void print_report(std::ostream& os, const RunReport& r) {
  for (const SuiteOutcome& s : r.suites) {
    os << "suite " << s.suite << "\n";
    for (const CheckLine& c : s.checks) {
      std::string tag = c.status == "pass" ? "PASS" : c.status == "skip" ? "SKIP" : "FAIL";
      os << "  " << tag << " " << c.id;
      if (!c.witness.empty()) os << ": " << c.witness;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.1f", c.elapsed_ms);
      os << "  [" << buf << " ms]\n";
    }
  }
  os << (r.all_ok() ? "OK" : "FAIL") << "\n";
}

}  // namespace nclb

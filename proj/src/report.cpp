#include "loopcas/report.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>

namespace loopcas {

void Report::absorb(const Report& other, const std::string& prefix) {
  for (auto& r : other.records) records.push_back({prefix + r.id, r.ref, r.pass, r.witness});
}

std::string report_to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["tool"] = "loopcas";
  j["version"] = kToolVersion;
  j["job"] = r.job;
  j["manifest_digest"] = r.manifest_digest;
  j["pass"] = r.all_pass();
  auto arr = nlohmann::ordered_json::array();
  for (auto& rec : r.records) {
    nlohmann::ordered_json e;
    e["id"] = rec.id;
    e["ref"] = rec.ref;
    e["status"] = rec.pass ? "pass" : "fail";
    e["witness"] = rec.witness;
    arr.push_back(std::move(e));
  }
  j["records"] = std::move(arr);
  return j.dump(2) + "\n";
}

std::string report_to_text(const Report& r) {
  std::string out;
  std::size_t failed = 0;
  for (auto& rec : r.records) {
    out += rec.pass ? "[PASS] " : "[FAIL] ";
    out += rec.id;
    if (!rec.ref.empty()) out += "  (" + rec.ref + ")";
    if (!rec.witness.empty()) out += (rec.pass ? "\n       = " : "\n       witness: ") + rec.witness;
    out += "\n";
    if (!rec.pass) ++failed;
  }
  out += r.job + ": " + std::to_string(r.records.size() - failed) + "/" +
         std::to_string(r.records.size()) + " assertions passed\n";
  return out;
}

std::string digest_bytes(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  static const char* hex = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = hex[h & 0xF];
    h >>= 4;
  }
  buf[16] = 0;
  return std::string(buf);
}

}  // namespace loopcas

#ifndef LOOPCAS_REPORT_HPP
#define LOOPCAS_REPORT_HPP

#include <string>
#include <vector>

namespace loopcas {

inline constexpr const char* kToolVersion = "0.1.0";

// One verified assertion. `ref` names the rule being checked (stable
// identifier, shared between human and machine output); `witness` holds the
// first offending value when the assertion fails.
struct Record {
  std::string id;
  std::string ref;
  bool pass = false;
  std::string witness;
};

struct Report {
  std::string job;
  std::string manifest_digest;  // empty when not manifest-driven
  std::vector<Record> records;

  bool all_pass() const {
    for (auto& r : records)
      if (!r.pass) return false;
    return true;
  }
  void add(std::string id, std::string ref, bool pass, std::string witness = "") {
    records.push_back({std::move(id), std::move(ref), pass, std::move(witness)});
  }
  void absorb(const Report& other, const std::string& prefix);
};

// Deterministic machine rendering (JSON, ordered keys, no timing data).
std::string report_to_json(const Report& r);
// Human rendering: one line per record plus a summary.
std::string report_to_text(const Report& r);

// FNV-1a digest of the manifest bytes, hex-rendered; identifies inputs in
// machine reports.
std::string digest_bytes(const std::string& bytes);

}  // namespace loopcas

#endif

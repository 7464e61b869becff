#ifndef LOOPCAS_MANIFEST_HPP
#define LOOPCAS_MANIFEST_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "loopcas/context.hpp"
#include "loopcas/laurent.hpp"
#include "loopcas/transgression.hpp"

namespace loopcas {

enum class Job {
  Transgress,
  Dinv,
  Action,
  Residue,
  VerifyInvariance,
  VerifyAutomorphism,
  VerifyFactorization,
  Selftest,
};

const char* job_name(Job j);
std::optional<Job> job_from_name(const std::string& s);

// Validated run description (JSON on disk; unknown fields rejected).
struct Manifest {
  int dimension = 1;
  TruncationContext truncation;
  Job job = Job::Selftest;
  std::uint64_t seed = 1;
  int samples = 5;
  int weight = 0;      // basis weight for verify-automorphism
  int j_max = 2;       // point count cap for verify-factorization
  int m_max = 3;       // derivation order for verify-invariance

  std::optional<XForm> eta;            // degree-1 input
  std::optional<XForm> omega;          // degree-2 input
  std::optional<Polynomial> candidate;  // bare loop function
  std::vector<LaurentSeries> residue_slots;  // a_0, a_1, ..., a_p

  std::string raw;  // original bytes, for the digest
};

// Parses and validates; SyntaxError carries line/column, UnknownField /
// InvalidRational / InvalidVariableToken name the offender.
Manifest parse_manifest(const std::string& text);

}  // namespace loopcas

#endif

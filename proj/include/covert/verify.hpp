#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace covert {

struct VerifyOptions {
  long trials = 1000000;
  std::uint64_t seed = 42;
  int threads = 1;
};

enum class Verdict { pass, fail, inconclusive, info };
const char* to_string(Verdict v);

struct VerifyCase {
  std::string group;
  std::string name;
  double reference = 0.0;  // closed form
  double estimate = 0.0;   // oracle or simulation
  double tolerance = 0.0;  // allowed |estimate - reference|
  Verdict verdict = Verdict::pass;
};

// Each group draws its configurations from `seed`.

/// Single-antenna FA/MD at I = 30 against the Monte-Carlo radiometer.
std::vector<VerifyCase> mc_single_cases(const VerifyOptions& opts, int configs = 5);
/// K-antenna FA/MD for K cycling through {2, 4, 6}.
std::vector<VerifyCase> mc_multi_cases(const VerifyOptions& opts, int configs = 5);
/// K = 1 multi-antenna simulation against the single-antenna one.
std::vector<VerifyCase> mc_paired_cases(const VerifyOptions& opts);
/// Closed-form KL divergence against the covariance-matrix oracle.
std::vector<VerifyCase> kl_oracle_cases(std::uint64_t seed, int points = 200);
/// dep_single against adaptive quadrature.
std::vector<VerifyCase> quadrature_cases(int points = 20);
/// Covertness caps: DEP at the single-antenna cap, small-SINR form and KL
/// residual of the multi-antenna cap.
std::vector<VerifyCase> cap_cases();
/// Informational: the chi-squared scaling written with full determinants
/// (carrying sigma^{2(K-1)}) compared with simulation at a physical noise
/// floor. Never fails.
std::vector<VerifyCase> model_mismatch_cases(const VerifyOptions& opts);

struct VerifyReport {
  VerifyOptions options;
  std::vector<VerifyCase> cases;
  int count(Verdict v) const;
  bool ok() const { return count(Verdict::fail) == 0; }
};

VerifyReport run_verification(const VerifyOptions& opts);
std::string verification_json(const VerifyReport& rep);

}  // namespace covert

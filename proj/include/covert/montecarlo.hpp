#pragma once

#include <cstdint>

#include "covert/detection.hpp"

namespace covert {

struct McConfig {
  long trials = 1000000;
  std::uint64_t seed = 42;
  SlotDetectionInput input;
  int n_obs = 30;
  int n_antennas = 1;
  int threads = 1;
};

/// Empirical detection rates. Half-widths are 3 sigma binomial widths
/// computed from the estimates.
struct McEstimate {
  double fa_hat = 0.0;
  double md_hat = 0.0;
  double fa_halfwidth = 0.0;
  double md_halfwidth = 0.0;
  long trials = 0;
};

/// Single-antenna radiometer: I complex symbols per trial under each
/// hypothesis, total energy against the likelihood-ratio threshold.
McEstimate simulate_single(const McConfig& cfg);

/// K-antenna detector: draws the full K x I observation matrix and applies
/// the quadratic-form statistic with the log-determinant-ratio threshold.
McEstimate simulate_multi(const McConfig& cfg);

/// 3 sigma binomial half-width around a reference probability p.
double binomial_halfwidth(double p, long trials);
/// |p_hat - p| <= 3 sigma(p) + 1/trials. The 1/trials term keeps the band
/// nonempty when p is 0 or 1.
bool within_band(double p, double p_hat, long trials);

/// I * [tr(K1^-1 K0) - K + ln(det K1 / det K0)] from dense factorizations.
/// Throws SingularCovariance if the noise power is zero.
double kl_matrix_oracle(const SlotDetectionInput& in, int n_obs, int n_antennas);

/// 1 - integral of the Gamma(I, 1) density between the two threshold
/// arguments, by adaptive Gauss-Kronrod quadrature.
double dep_quadrature(double gamma1, int n_obs);

}  // namespace covert

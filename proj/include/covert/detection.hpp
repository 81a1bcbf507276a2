#pragma once

namespace covert {

struct DetectorParams {
  int n_obs = 30;
  int n_antennas = 1;
  double epsilon = 0.05;
};

/// Per-slot quantities seen by one warden. Gains are |h|^2 of a single
/// antenna element.
struct SlotDetectionInput {
  double p_s = 0.0;
  double p_jam = 0.0;
  double gain_sw = 0.0;
  double gain_jw = 0.0;
  double noise = 1.0;
};

struct DetectionProbabilities {
  double false_alarm = 0.0;
  double missed_detection = 1.0;
  double dep() const { return false_alarm + missed_detection; }
};

/// Regularized incomplete gamma functions for integer order `a`.
/// Both are evaluated directly so that neither suffers from 1 - x cancellation.
double reg_lower_gamma(int a, double x);
double reg_upper_gamma(int a, double x);

double sinr_single(const SlotDetectionInput& in);
double sinr_multi(const SlotDetectionInput& in, int n_antennas);

/// Radiometer false-alarm and missed-detection probabilities at the
/// likelihood-ratio threshold, as a function of the warden SINR.
DetectionProbabilities detection_single(double gamma1, int n_obs);
DetectionProbabilities detection_single(const SlotDetectionInput& in, int n_obs);

double dep_single(double gamma1, int n_obs);
double gamma_cap_single(double eps, int n_obs);

/// I * (ln(1+g) - g/(1+g)).
double kl_divergence(double gamma2, int n_obs);
double gamma_cap_multi(double eps, int n_obs);

struct MultiDetectorModel {
  double kappa0 = 0.0;
  double kappa1 = 0.0;
  double threshold = 0.0;  // lambda
};

/// Chi-squared scalings and threshold of the K-antenna likelihood-ratio
/// detector. Throws StatModelError if a scaling is not strictly positive.
MultiDetectorModel multi_detector_model(const SlotDetectionInput& in, int n_obs, int n_antennas);
DetectionProbabilities detection_multi(const SlotDetectionInput& in, int n_obs, int n_antennas);
double dep_multi(const SlotDetectionInput& in, int n_obs, int n_antennas);

double pinsker_bound(double kl);

}  // namespace covert

#include "covert/detection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <fmt/format.h>

#include "covert/errors.hpp"

namespace covert {

namespace {

constexpr int kFiniteSumMaxOrder = 150;

struct GammaPair {
  double p;
  double q;
};

struct Kahan {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    const double y = v - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

// x^e e^{-x} / Gamma(a) in extended precision; lgamma(a) reaches several
// hundred, which would cost ~1e-14 relative in a double exponent.
double prefactor(int e, int a, double x) {
  const long double lx = static_cast<long double>(x);
  return static_cast<double>(std::exp(e * std::log(lx) - lx - std::lgamma(static_cast<long double>(a))));
}

// P(a, x) by the power series, valid (fast) for x < a + 1.
double lower_series(int a, double x) {
  Kahan s;
  double term = 1.0 / a;
  s.add(term);
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    s.add(term);
    if (term < s.sum * 1e-17) break;
  }
  return prefactor(a, a, x) * s.sum;
}

// Q(a, x) = e^{-x} sum_{k<a} x^k / k!, summed from the largest term down.
double upper_finite_sum(int a, double x) {
  double term = prefactor(a - 1, a, x);
  Kahan s;
  for (int k = a - 1; k >= 0; --k) {
    s.add(term);
    term *= k / x;
  }
  return s.sum;
}

// Q(a, x) by the modified Lentz continued fraction, for x >= a + 1.
double upper_continued_fraction(int a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return prefactor(a, a, x) * h;
}

GammaPair reg_gamma(int a, double x) {
  if (a < 1) throw DomainError(fmt::format("incomplete gamma order {} < 1", a));
  if (!(x >= 0.0)) throw DomainError(fmt::format("incomplete gamma argument {} < 0", x));
  if (x == 0.0) return {0.0, 1.0};
  if (std::isinf(x)) return {1.0, 0.0};
  if (x < a + 1.0) {
    const double p = std::clamp(lower_series(a, x), 0.0, 1.0);
    return {p, 1.0 - p};
  }
  const double q = std::clamp(
      a <= kFiniteSumMaxOrder ? upper_finite_sum(a, x) : upper_continued_fraction(a, x), 0.0, 1.0);
  return {1.0 - q, q};
}

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError(fmt::format("epsilon {} outside (0, 1)", eps));
}

// Root of a strictly increasing f with f(0) < 0, bracket [0, 1] doubled up to 1e9.
double bisect_increasing(const std::function<double(double)>& f) {
  double lo = 0.0;
  double hi = 1.0;
  while (f(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9) throw BracketError("no bracketing SINR below 1e9");
  }
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  // lo is the conservative side: the covertness requirement holds there.
  return lo;
}

}  // namespace

double reg_lower_gamma(int a, double x) { return reg_gamma(a, x).p; }
double reg_upper_gamma(int a, double x) { return reg_gamma(a, x).q; }

double sinr_single(const SlotDetectionInput& in) {
  return in.p_s * in.gain_sw / (in.p_jam * in.gain_jw + in.noise);
}

double sinr_multi(const SlotDetectionInput& in, int n_antennas) {
  const double k = n_antennas;
  return in.p_s * k * in.gain_sw / (in.noise + in.p_jam * k * in.gain_jw);
}

DetectionProbabilities detection_single(double gamma1, int n_obs) {
  if (!(gamma1 >= 0.0)) throw DomainError(fmt::format("SINR {} < 0", gamma1));
  if (gamma1 < 1e-12) return {0.0, 1.0};
  // Threshold over each hypothesis' per-symbol power: zeta/sigma_1^2 and zeta/sigma_0^2.
  const double l = std::log1p(gamma1) / gamma1;
  const double md_arg = n_obs * l;
  const double fa_arg = n_obs * (1.0 + gamma1) * l;
  return {reg_upper_gamma(n_obs, fa_arg), reg_lower_gamma(n_obs, md_arg)};
}

DetectionProbabilities detection_single(const SlotDetectionInput& in, int n_obs) {
  return detection_single(sinr_single(in), n_obs);
}

double dep_single(double gamma1, int n_obs) {
  return std::clamp(detection_single(gamma1, n_obs).dep(), 0.0, 1.0);
}

double gamma_cap_single(double eps, int n_obs) {
  check_eps(eps);
  return bisect_increasing([&](double g) { return (1.0 - eps) - dep_single(g, n_obs); });
}

double kl_divergence(double gamma2, int n_obs) {
  if (!(gamma2 >= 0.0)) throw DomainError(fmt::format("SINR {} < 0", gamma2));
  if (gamma2 < 0.05) {
    // sum_{k>=2} (-1)^k (k-1)/k g^k, avoids the cancellation of the closed form.
    Kahan s;
    double pw = gamma2;
    for (int k = 2; k < 60; ++k) {
      pw *= -gamma2;
      const double term = -pw * (k - 1) / k;
      s.add(term);
      if (std::fabs(term) < 1e-18 * std::fabs(s.sum)) break;
    }
    return n_obs * s.sum;
  }
  return n_obs * (std::log1p(gamma2) - gamma2 / (1.0 + gamma2));
}

double gamma_cap_multi(double eps, int n_obs) {
  check_eps(eps);
  const double target = 2.0 * eps * eps;
  return bisect_increasing([&](double g) { return kl_divergence(g, n_obs) - target; });
}

MultiDetectorModel multi_detector_model(const SlotDetectionInput& in, int n_obs, int n_antennas) {
  if (n_antennas < 1) throw DomainError("n_antennas < 1");
  const double k = n_antennas;
  const double a = in.p_jam * in.gain_jw;
  const double b = a + in.p_s * in.gain_sw;
  // Nonzero eigenvalue of K_j along the all-ones direction; the other K-1
  // eigenvalues equal sigma^2 and drop out of the statistic.
  const double e0 = in.noise + k * a;
  const double e1 = in.noise + k * b;
  const double bracket = k * (b - a) / (e1 * e0);
  MultiDetectorModel m;
  m.kappa0 = e0 * bracket;
  m.kappa1 = e1 * bracket;
  m.threshold = n_obs * std::log1p(k * (b - a) / e0);
  if (!(m.kappa0 > 0.0) || !(m.kappa1 > 0.0) || !std::isfinite(m.kappa1))
    throw StatModelError(fmt::format("chi-squared scalings not positive (kappa0={}, kappa1={})",
                                     m.kappa0, m.kappa1));
  return m;
}

DetectionProbabilities detection_multi(const SlotDetectionInput& in, int n_obs, int n_antennas) {
  if (in.p_s < 0.0 || in.p_jam < 0.0 || in.gain_sw < 0.0 || in.gain_jw < 0.0 || !(in.noise > 0.0))
    throw DomainError("invalid detection input");
  if (n_antennas < 1) throw DomainError("n_antennas < 1");
  if (sinr_multi(in, n_antennas) < 1e-12) return {0.0, 1.0};
  const MultiDetectorModel m = multi_detector_model(in, n_obs, n_antennas);
  return {reg_upper_gamma(n_obs, m.threshold / m.kappa0), reg_lower_gamma(n_obs, m.threshold / m.kappa1)};
}

double dep_multi(const SlotDetectionInput& in, int n_obs, int n_antennas) {
  return std::clamp(detection_multi(in, n_obs, n_antennas).dep(), 0.0, 1.0);
}

double pinsker_bound(double kl) {
  if (!(kl >= 0.0)) throw DomainError(fmt::format("KL divergence {} < 0", kl));
  return std::max(0.0, 1.0 - std::sqrt(kl / 2.0));
}

}  // namespace covert

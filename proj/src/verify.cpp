#include "covert/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include <fmt/format.h>
#include <json.hpp>

#include "covert/detection.hpp"
#include "covert/montecarlo.hpp"

namespace covert {

namespace {

// Monte-Carlo verdict: outside the band counts as a failure only when the
// binomial normal approximation is trustworthy and the band is narrow.
Verdict mc_verdict(double p, double est, long n, double& tol) {
  tol = binomial_halfwidth(p, n) + 1.0 / static_cast<double>(n);
  if (within_band(p, est, n)) return Verdict::pass;
  const double rare = static_cast<double>(n) * std::min(p, 1.0 - p);
  if (rare < 10.0 || binomial_halfwidth(p, n) > 0.02) return Verdict::inconclusive;
  return Verdict::fail;
}

void push_mc(std::vector<VerifyCase>& out, const std::string& group, const std::string& name,
             const DetectionProbabilities& ref, const McEstimate& est) {
  VerifyCase fa{group, name + " fa", ref.false_alarm, est.fa_hat};
  fa.verdict = mc_verdict(ref.false_alarm, est.fa_hat, est.trials, fa.tolerance);
  VerifyCase md{group, name + " md", ref.missed_detection, est.md_hat};
  md.verdict = mc_verdict(ref.missed_detection, est.md_hat, est.trials, md.tolerance);
  out.push_back(fa);
  out.push_back(md);
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
}

McConfig mc_config(const VerifyOptions& opts, const SlotDetectionInput& in, int n_obs, int k, std::uint64_t salt) {
  McConfig cfg;
  cfg.trials = opts.trials;
  cfg.seed = opts.seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1));
  cfg.input = in;
  cfg.n_obs = n_obs;
  cfg.n_antennas = k;
  cfg.threads = opts.threads;
  return cfg;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::info: return "info";
  }
  return "unknown";
}

std::vector<VerifyCase> mc_single_cases(const VerifyOptions& opts, int configs) {
  std::vector<VerifyCase> out;
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < configs; ++i) {
    SlotDetectionInput in;
    in.noise = 1.0;
    in.gain_jw = 0.5 + 1.5 * unit(rng);
    in.p_jam = unit(rng);
    in.gain_sw = 1.0;
    const double gamma = log_uniform(rng, 0.05, 1.0);
    in.p_s = gamma * (in.noise + in.p_jam * in.gain_jw);
    const McEstimate est = simulate_single(mc_config(opts, in, 30, 1, static_cast<std::uint64_t>(i)));
    push_mc(out, "mc_single", fmt::format("cfg{} gamma={:.4f} I=30", i, gamma), detection_single(in, 30), est);
  }
  return out;
}

std::vector<VerifyCase> mc_multi_cases(const VerifyOptions& opts, int configs) {
  static constexpr std::array<int, 3> kAntennas{2, 4, 6};
  std::vector<VerifyCase> out;
  std::mt19937_64 rng(opts.seed + 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < configs; ++i) {
    const int k = kAntennas[static_cast<std::size_t>(i) % kAntennas.size()];
    SlotDetectionInput in;
    in.noise = 1.0;
    in.gain_jw = 0.5 + 1.5 * unit(rng);
    in.p_jam = unit(rng);
    in.gain_sw = 1.0;
    const double gamma = log_uniform(rng, 0.05, 1.0);
    in.p_s = gamma * (in.noise + k * in.p_jam * in.gain_jw) / k;
    const McEstimate est = simulate_multi(mc_config(opts, in, 30, k, 100 + static_cast<std::uint64_t>(i)));
    push_mc(out, "mc_multi", fmt::format("cfg{} K={} gamma={:.4f} I=30", i, k, gamma),
            detection_multi(in, 30, k), est);
  }
  return out;
}

std::vector<VerifyCase> mc_paired_cases(const VerifyOptions& opts) {
  SlotDetectionInput in;
  in.noise = 1.0;
  in.p_jam = 0.5;
  in.gain_jw = 1.0;
  in.gain_sw = 1.0;
  in.p_s = 0.3 * 1.5;
  const McEstimate a = simulate_single(mc_config(opts, in, 30, 1, 200));
  const McEstimate b = simulate_multi(mc_config(opts, in, 30, 1, 201));
  const double n = static_cast<double>(opts.trials);
  auto paired = [&](const char* name, double pa, double pb) {
    VerifyCase c{"mc_paired", name, pa, pb};
    c.tolerance = 3.0 * std::sqrt((pa * (1 - pa) + pb * (1 - pb)) / n) + 2.0 / n;
    c.verdict = std::fabs(pa - pb) <= c.tolerance ? Verdict::pass
                : c.tolerance > 0.02              ? Verdict::inconclusive
                                                  : Verdict::fail;
    return c;
  };
  return {paired("K=1 multi vs single fa", a.fa_hat, b.fa_hat),
          paired("K=1 multi vs single md", a.md_hat, b.md_hat)};
}

std::vector<VerifyCase> kl_oracle_cases(std::uint64_t seed, int points) {
  std::vector<VerifyCase> out;
  std::mt19937_64 rng(seed + 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> obs(1, 100), ant(1, 8);
  for (int i = 0; i < points; ++i) {
    const double gamma = log_uniform(rng, 1e-2, 10.0);
    const int n_obs = obs(rng);
    const int k = ant(rng);
    SlotDetectionInput in;
    in.noise = 1.0;
    in.p_jam = unit(rng);
    in.gain_jw = 0.1 + 1.9 * unit(rng);
    in.gain_sw = 1.0;
    in.p_s = gamma * (in.noise + k * in.p_jam * in.gain_jw) / k;
    VerifyCase c{"kl_oracle", fmt::format("gamma={:.4g} I={} K={}", gamma, n_obs, k),
                 kl_divergence(sinr_multi(in, k), n_obs), kl_matrix_oracle(in, n_obs, k)};
    c.tolerance = 1e-10 * std::fabs(c.reference);
    c.verdict = std::fabs(c.estimate - c.reference) <= c.tolerance ? Verdict::pass : Verdict::fail;
    out.push_back(c);
  }
  return out;
}

std::vector<VerifyCase> quadrature_cases(int points) {
  std::vector<VerifyCase> out;
  for (int i = 0; i < points; ++i) {
    const double gamma = std::pow(10.0, -3.0 + 5.0 * i / std::max(points - 1, 1));
    VerifyCase c{"quadrature", fmt::format("gamma={:.4g} I=30", gamma), dep_single(gamma, 30),
                 dep_quadrature(gamma, 30), 1e-9};
    c.verdict = std::fabs(c.estimate - c.reference) <= c.tolerance ? Verdict::pass : Verdict::fail;
    out.push_back(c);
  }
  // One observation: the Gamma(1, 1) mass between the limits is e^-lo - e^-hi.
  for (double gamma : {0.1, 1.0, 10.0}) {
    const double l = std::log1p(gamma) / gamma;
    VerifyCase c{"quadrature", fmt::format("gamma={:.4g} I=1 exponential", gamma),
                 1.0 - (std::exp(-l) - std::exp(-(1.0 + gamma) * l)), dep_quadrature(gamma, 1), 1e-12};
    c.verdict = std::fabs(c.estimate - c.reference) <= c.tolerance ? Verdict::pass : Verdict::fail;
    out.push_back(c);
  }
  return out;
}

std::vector<VerifyCase> cap_cases() {
  constexpr double eps = 0.05;
  constexpr int n_obs = 30;
  const double cap1 = gamma_cap_single(eps, n_obs);
  const double cap2 = gamma_cap_multi(eps, n_obs);
  const double small = 2.0 * eps / std::sqrt(static_cast<double>(n_obs));
  std::vector<VerifyCase> out{
      {"caps", "dep_single at single-antenna cap", 1.0 - eps, dep_single(cap1, n_obs), 1e-10},
      {"caps", "multi-antenna cap vs 2 eps / sqrt(I)", small, cap2, 0.02 * small},
      {"caps", "KL residual at multi-antenna cap", 2.0 * eps * eps, kl_divergence(cap2, n_obs), 1e-12},
  };
  for (auto& c : out)
    c.verdict = std::fabs(c.estimate - c.reference) <= c.tolerance ? Verdict::pass : Verdict::fail;
  return out;
}

std::vector<VerifyCase> model_mismatch_cases(const VerifyOptions& opts) {
  // Physical scale: sigma^2 = 1e-15 W, LoS gains at a few hundred meters.
  constexpr int k = 6;
  constexpr int n_obs = 30;
  SlotDetectionInput in;
  in.noise = 1e-15;
  in.p_jam = 0.1;
  in.gain_jw = 1e-3 / (300.0 * 300.0 + 70.0 * 70.0);
  in.gain_sw = 1e-3 / (200.0 * 200.0 + 100.0 * 100.0);
  const double gamma = 0.3;
  in.p_s = gamma * (in.noise + k * in.p_jam * in.gain_jw) / (k * in.gain_sw);

  const McEstimate est = simulate_multi(mc_config(opts, in, n_obs, k, 300));
  const DetectionProbabilities ref = detection_multi(in, n_obs, k);

  std::vector<VerifyCase> out;
  push_mc(out, "model_mismatch", fmt::format("physical scale K={} gamma={}", k, gamma), ref, est);

  // Same statistic with kappa_j scaled by det(K_j) instead of the rank-one
  // eigenvalue: an extra sigma^{2(K-1)} factor.
  const MultiDetectorModel m = multi_detector_model(in, n_obs, k);
  const double extra = std::pow(in.noise, k - 1);
  const double fa = reg_upper_gamma(n_obs, m.threshold / (m.kappa0 * extra));
  const double md = reg_lower_gamma(n_obs, m.threshold / (m.kappa1 * extra));
  out.push_back({"model_mismatch", "full-determinant scaling dep vs simulated dep", fa + md,
                 est.fa_hat + est.md_hat, 0.0, Verdict::info});
  return out;
}

int VerifyReport::count(Verdict v) const {
  return static_cast<int>(std::count_if(cases.begin(), cases.end(), [v](const VerifyCase& c) { return c.verdict == v; }));
}

VerifyReport run_verification(const VerifyOptions& opts) {
  VerifyReport rep;
  rep.options = opts;
  auto add = [&](std::vector<VerifyCase> v) { rep.cases.insert(rep.cases.end(), v.begin(), v.end()); };
  add(mc_single_cases(opts));
  add(mc_multi_cases(opts));
  add(mc_paired_cases(opts));
  add(model_mismatch_cases(opts));
  add(kl_oracle_cases(opts.seed));
  add(quadrature_cases());
  add(cap_cases());
  return rep;
}

std::string verification_json(const VerifyReport& rep) {
  nlohmann::json doc;
  doc["trials"] = rep.options.trials;
  doc["seed"] = rep.options.seed;
  doc["passed"] = rep.count(Verdict::pass);
  doc["failed"] = rep.count(Verdict::fail);
  doc["inconclusive"] = rep.count(Verdict::inconclusive);
  doc["informational"] = rep.count(Verdict::info);
  doc["cases"] = nlohmann::json::array();
  for (const auto& c : rep.cases)
    doc["cases"].push_back({{"group", c.group},
                            {"name", c.name},
                            {"reference", c.reference},
                            {"estimate", c.estimate},
                            {"tolerance", c.tolerance},
                            {"verdict", to_string(c.verdict)}});
  return doc.dump(2) + "\n";
}

}  // namespace covert

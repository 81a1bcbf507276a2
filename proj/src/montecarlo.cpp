#include "covert/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <thread>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "covert/errors.hpp"

namespace covert {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-trial stream keyed by (seed, trial, hypothesis), so results do not
// depend on how trials are split across threads.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t trial, int hyp)
      : state_(splitmix(seed ^ splitmix(2 * trial + static_cast<std::uint64_t>(hyp)))) {}

  double uniform_pm1() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-52 - 1.0;
  }

  // CN(0, 1): real and imaginary parts N(0, 1/2), Marsaglia polar method.
  std::complex<double> cnormal() {
    for (;;) {
      const double u = uniform_pm1();
      const double v = uniform_pm1();
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) {
        const double f = std::sqrt(-std::log(s) / s);
        return {u * f, v * f};
      }
    }
  }

 private:
  std::uint64_t state_;
};

void check_config(const McConfig& cfg) {
  if (cfg.trials < 1) throw DomainError("trials < 1");
  if (cfg.n_obs < 1) throw DomainError("n_obs < 1");
  if (cfg.n_antennas < 1) throw DomainError("n_antennas < 1");
  const auto& in = cfg.input;
  if (in.p_s < 0.0 || in.p_jam < 0.0 || in.gain_sw < 0.0 || in.gain_jw < 0.0 || !(in.noise > 0.0))
    throw DomainError("invalid detection input");
}

struct Counts {
  long fa = 0;
  long md = 0;
};

// Runs `trial(t, counts)` for t in [0, trials) over cfg.threads workers.
template <class F>
Counts run_trials(const McConfig& cfg, F trial) {
  const int workers = static_cast<int>(std::clamp<long>(cfg.threads, 1, cfg.trials));
  std::vector<Counts> parts(static_cast<std::size_t>(workers));
  auto body = [&](int w) {
    const long lo = cfg.trials * w / workers;
    const long hi = cfg.trials * (w + 1) / workers;
    for (long t = lo; t < hi; ++t) trial(static_cast<std::uint64_t>(t), parts[static_cast<std::size_t>(w)]);
  };
  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(body, w);
    for (auto& th : pool) th.join();
  }
  Counts total;
  for (const auto& p : parts) {
    total.fa += p.fa;
    total.md += p.md;
  }
  return total;
}

McEstimate finish(const Counts& c, long trials) {
  McEstimate e;
  e.trials = trials;
  e.fa_hat = static_cast<double>(c.fa) / trials;
  e.md_hat = static_cast<double>(c.md) / trials;
  e.fa_halfwidth = binomial_halfwidth(e.fa_hat, trials);
  e.md_halfwidth = binomial_halfwidth(e.md_hat, trials);
  return e;
}

}  // namespace

double binomial_halfwidth(double p, long trials) {
  return 3.0 * std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(trials));
}

bool within_band(double p, double p_hat, long trials) {
  return std::fabs(p_hat - p) <= binomial_halfwidth(p, trials) + 1.0 / static_cast<double>(trials);
}

McEstimate simulate_single(const McConfig& cfg) {
  check_config(cfg);
  if (cfg.n_antennas != 1) throw DomainError("simulate_single requires one antenna");
  const auto& in = cfg.input;
  const double var0 = in.p_jam * in.gain_jw + in.noise;
  const double var1 = var0 + in.p_s * in.gain_sw;
  const int n_obs = cfg.n_obs;
  // Likelihood-ratio threshold on the total received energy.
  const double zeta = var1 > var0 ? n_obs * var0 * var1 * std::log(var1 / var0) / (var1 - var0)
                                  : n_obs * var0;
  const double sd0 = std::sqrt(var0), sd1 = std::sqrt(var1);

  const Counts c = run_trials(cfg, [&](std::uint64_t t, Counts& acc) {
    Stream h0(cfg.seed, t, 0), h1(cfg.seed, t, 1);
    double e0 = 0.0, e1 = 0.0;
    for (int i = 0; i < n_obs; ++i) {
      e0 += std::norm(sd0 * h0.cnormal());
      e1 += std::norm(sd1 * h1.cnormal());
    }
    if (e0 >= zeta) ++acc.fa;
    if (e1 < zeta) ++acc.md;
  });
  return finish(c, cfg.trials);
}

McEstimate simulate_multi(const McConfig& cfg) {
  check_config(cfg);
  const auto& in = cfg.input;
  const int k = cfg.n_antennas;
  const int n_obs = cfg.n_obs;
  const double sigma2 = in.noise;
  const double sd_noise = std::sqrt(sigma2);
  const double amp_j = std::sqrt(in.p_jam * in.gain_jw);
  const double amp_s = std::sqrt(in.p_s * in.gain_sw);

  // Identical-entry channel vectors: h_J = sqrt(|h_J|^2) 1, g = G 1.
  const double h_entry = std::sqrt(in.gain_jw);
  const double g_entry = std::sqrt(in.p_jam * in.gain_jw + in.p_s * in.gain_sw);
  const double h_norm2 = k * in.gain_jw;
  const double g_norm2 = k * g_entry * g_entry;
  const double w_g = 1.0 / (sigma2 * (sigma2 + g_norm2));
  const double w_h = in.p_jam > 0.0 ? 1.0 / (sigma2 * (sigma2 / in.p_jam + h_norm2)) : 0.0;
  // ln(det K1 / det K0); the sigma^{2(K-1)} factors cancel.
  const double lambda = n_obs * std::log((sigma2 + g_norm2) / (sigma2 + in.p_jam * h_norm2));

  auto statistic = [&](Stream& s, bool transmit) {
    double gy = 0.0, hy = 0.0;
    for (int i = 0; i < n_obs; ++i) {
      std::complex<double> common = amp_j * s.cnormal();
      if (transmit) common += amp_s * s.cnormal();
      std::complex<double> g_dot{0.0, 0.0}, h_dot{0.0, 0.0};
      for (int a = 0; a < k; ++a) {
        const std::complex<double> y = common + sd_noise * s.cnormal();
        g_dot += g_entry * y;
        h_dot += h_entry * y;
      }
      gy += std::norm(g_dot);
      hy += std::norm(h_dot);
    }
    return w_g * gy - w_h * hy;
  };

  const Counts c = run_trials(cfg, [&](std::uint64_t t, Counts& acc) {
    Stream h0(cfg.seed, t, 0), h1(cfg.seed, t, 1);
    if (statistic(h0, false) >= lambda) ++acc.fa;
    if (statistic(h1, true) < lambda) ++acc.md;
  });
  return finish(c, cfg.trials);
}

double kl_matrix_oracle(const SlotDetectionInput& in, int n_obs, int n_antennas) {
  if (!(in.noise > 0.0)) throw SingularCovariance("noise power must be positive");
  if (n_obs < 1 || n_antennas < 1) throw DomainError("n_obs and n_antennas must be >= 1");
  const int k = n_antennas;
  using Mat = Eigen::MatrixXd;
  // Jamming amplitude sqrt(P_J) h, so that P_S = 0 gives K1 == K0 bit for bit.
  const Eigen::VectorXd h = Eigen::VectorXd::Constant(k, std::sqrt(in.p_jam * in.gain_jw));
  const Eigen::VectorXd g = Eigen::VectorXd::Constant(k, std::sqrt(in.p_jam * in.gain_jw + in.p_s * in.gain_sw));
  const Mat eye = Mat::Identity(k, k);
  const Mat k0 = in.noise * eye + h * h.transpose();
  const Mat k1 = in.noise * eye + g * g.transpose();
  const Mat delta = k1 - k0;

  const Eigen::LLT<Mat> l0(k0), l1(k1);
  if (l0.info() != Eigen::Success || l1.info() != Eigen::Success)
    throw SingularCovariance("covariance is not positive definite");

  // tr(K1^-1 K0) - K = -tr(K1^-1 (K1 - K0)); kept in difference form to
  // avoid cancelling against K.
  const double trace_term = -l1.solve(delta).trace();
  // ln det(K1)/det(K0) = ln det(I + L0^-1 (K1 - K0) L0^-T).
  Mat x = l0.matrixL().solve(delta);
  x = l0.matrixL().solve(x.transpose()).eval();
  const Eigen::LLT<Mat> lm(eye + 0.5 * (x + x.transpose()));
  if (lm.info() != Eigen::Success) throw SingularCovariance("covariance ratio is not positive definite");
  double logdet = 0.0;
  for (int i = 0; i < k; ++i) logdet += 2.0 * std::log(lm.matrixLLT()(i, i));
  return n_obs * (trace_term + logdet);
}

double dep_quadrature(double gamma1, int n_obs) {
  if (!(gamma1 > 0.0)) throw DomainError(fmt::format("SINR {} must be positive", gamma1));
  if (n_obs < 1) throw DomainError("n_obs < 1");
  const double l = std::log1p(gamma1) / gamma1;
  const double lo = n_obs * l;
  const double hi = n_obs * (1.0 + gamma1) * l;
  const double lg = std::lgamma(static_cast<double>(n_obs));
  auto density = [&](double t) {
    if (n_obs == 1) return std::exp(-t);
    if (t <= 0.0) return 0.0;
    return std::exp((n_obs - 1) * std::log(t) - t - lg);
  };
  double err = 0.0;
  const double mass =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(density, lo, hi, 20, 1e-14, &err);
  return 1.0 - mass;
}

}  // namespace covert

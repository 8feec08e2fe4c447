#include "wearsim/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

namespace wearsim {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
  // Decorrelate (seed, stream) pairs before use.
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s = stream ^ 0xD1B54A32D192ED03ull;
  std::uint64_t b = splitmix64(s);
  state_ = a ^ (b * 0x9E3779B97F4A7C15ull + 0x2545F4914F6CDD1Dull);
}

std::uint64_t RngStream::next_u64() { return splitmix64(state_); }

double RngStream::next_uniform() {
  // 53-bit mantissa in (0, 1].
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double RngStream::next_normal() {
  const double u1 = next_uniform();
  const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::string to_string(Binding b) {
  switch (b) {
    case Binding::OxideThickness: return "d_ox";
    case Binding::OxideField: return "e_ox";
    case Binding::SubstrateCurrent: return "i_sub";
    case Binding::CurrentDensity: return "j_e";
    case Binding::EmActivationEnergy: return "ea_em";
    case Binding::NbtiActivationEnergy: return "e_nb";
    case Binding::GateVoltage: return "v_gate";
    case Binding::Temperature: return "temperature";
  }
  throw BindingError("unknown binding");
}

Binding binding_from_string(const std::string& s) {
  if (s == "d_ox") return Binding::OxideThickness;
  if (s == "e_ox") return Binding::OxideField;
  if (s == "i_sub") return Binding::SubstrateCurrent;
  if (s == "j_e") return Binding::CurrentDensity;
  if (s == "ea_em") return Binding::EmActivationEnergy;
  if (s == "e_nb") return Binding::NbtiActivationEnergy;
  if (s == "v_gate") return Binding::GateVoltage;
  if (s == "temperature") return Binding::Temperature;
  throw ConfigError("unknown parameter target '" + s + "'");
}

bool binding_compatible(Binding b, Mechanism m) {
  switch (b) {
    case Binding::OxideThickness:
    case Binding::OxideField:
      return m == Mechanism::OxideBreakdown;
    case Binding::SubstrateCurrent:
      return m == Mechanism::Hci;
    case Binding::CurrentDensity:
    case Binding::EmActivationEnergy:
      return m == Mechanism::Electromigration;
    case Binding::NbtiActivationEnergy:
      return m == Mechanism::Nbti;
    case Binding::GateVoltage:
      return m == Mechanism::Nbti || m == Mechanism::OxideBreakdown;
    case Binding::Temperature:
      return true;
  }
  return false;
}

double sample_parameter(const ParameterDistribution& dist,
                        const TrojanShift* shift, RngStream& rng) {
  const double mean = dist.mean + (shift ? shift->delta_mean : 0.0);
  const double sigma = dist.sigma * (shift ? shift->sigma_scale : 1.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    const double value = mean + sigma * rng.next_normal();
    if (!dist.floor || value > *dist.floor) return value;
  }
  throw NumericError("sample_parameter: '" + dist.name +
                     "' rejected 100 draws below the truncation floor");
}

double map_param_to_ttf(Mechanism m, const MechanismParams& params,
                        const BaseCondition& base, double value, Binding b) {
  if (!binding_compatible(b, m))
    throw BindingError("binding '" + to_string(b) +
                       "' is incompatible with mechanism '" + to_string(m) + "'");
  MechanismParams p = params;
  BaseCondition c = base;
  switch (b) {
    case Binding::OxideThickness:
      c.d_ox_cm = value;
      c.e_ox_Vcm.reset();
      break;
    case Binding::OxideField:
      c.e_ox_Vcm = value;
      break;
    case Binding::SubstrateCurrent:
      c.op.substrate_current_A = value;
      break;
    case Binding::CurrentDensity:
      c.op.current_density_A_cm2 = value;
      break;
    case Binding::EmActivationEnergy:
      std::get<EmParams>(p).ea_eV = value;
      break;
    case Binding::NbtiActivationEnergy:
      std::get<NbtiParams>(p).e_nb_eV = value;
      break;
    case Binding::GateVoltage:
      c.op.gate_voltage_V = value;
      break;
    case Binding::Temperature:
      c.op.temperature_K = value;
      break;
  }
  return mechanism_ttf(m, p, c);
}

namespace {

const TrojanShift* find_shift(const std::vector<TrojanShift>& shifts,
                              const std::string& name) {
  for (const auto& s : shifts)
    if (s.parameter_name == name) return &s;
  return nullptr;
}

}  // namespace

DeviceDraw sample_device(const PopulationConfig& cfg, bool shifted,
                         std::uint64_t device_index) {
  RngStream rng(cfg.seed, device_index);
  MechanismParams p = cfg.params;
  BaseCondition base = cfg.base;
  DeviceDraw draw;
  draw.parameter_values.reserve(cfg.distributions.size());
  for (const auto& dist : cfg.distributions) {
    if (!binding_compatible(dist.target, cfg.mechanism))
      throw BindingError("parameter '" + dist.name +
                         "' target is incompatible with the mechanism");
    const TrojanShift* shift =
        shifted ? find_shift(cfg.shifts, dist.name) : nullptr;
    const double value = sample_parameter(dist, shift, rng);
    draw.parameter_values.push_back(value);
    // Apply the override in place so several parameters can stack.
    switch (dist.target) {
      case Binding::OxideThickness:
        base.d_ox_cm = value;
        base.e_ox_Vcm.reset();
        break;
      case Binding::OxideField:
        base.e_ox_Vcm = value;
        break;
      case Binding::SubstrateCurrent:
        base.op.substrate_current_A = value;
        break;
      case Binding::CurrentDensity:
        base.op.current_density_A_cm2 = value;
        break;
      case Binding::EmActivationEnergy:
        std::get<EmParams>(p).ea_eV = value;
        break;
      case Binding::NbtiActivationEnergy:
        std::get<NbtiParams>(p).e_nb_eV = value;
        break;
      case Binding::GateVoltage:
        base.op.gate_voltage_V = value;
        break;
      case Binding::Temperature:
        base.op.temperature_K = value;
        break;
    }
  }
  double ttf = mechanism_ttf(cfg.mechanism, p, base);
  if (cfg.mechanism == Mechanism::OxideBreakdown) {
    const auto& ob = std::get<ObParams>(p);
    if (ob.weibull_shape > 0.0) {
      const double eta = ttf / std::tgamma(1.0 + 1.0 / ob.weibull_shape);
      ttf = weibull_sample({ob.weibull_shape, eta}, rng);
    }
  }
  draw.ttf = ttf;
  return draw;
}

namespace {

double device_ttf(const PopulationConfig& cfg, bool shifted,
                  std::uint64_t device_index) {
  return sample_device(cfg, shifted, device_index).ttf;
}

unsigned worker_count() {
  if (const char* env = std::getenv("WEARSIM_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<unsigned>(std::min<long>(n, 256));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return std::clamp(hw, 1u, 8u);
}

double interpolated_quantile(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = q * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

PopulationResult monte_carlo_population(const PopulationConfig& cfg,
                                        bool shifted) {
  if (cfg.n_samples < 1)
    throw ConfigError("monte_carlo_population: n_samples must be >= 1");
  if (!(cfg.mission_lifetime > 0.0))
    throw ConfigError("monte_carlo_population: mission lifetime must be > 0");

  PopulationResult result;
  result.seed = cfg.seed;
  result.sample_count = cfg.n_samples;
  result.ttf_samples.resize(cfg.n_samples);

  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(worker_count(), cfg.n_samples));
  if (workers <= 1 || cfg.n_samples < 2048) {
    for (std::size_t i = 0; i < cfg.n_samples; ++i)
      result.ttf_samples[i] = device_ttf(cfg, shifted, i);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const std::size_t chunk = (cfg.n_samples + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(begin + chunk, cfg.n_samples);
      if (begin >= end) break;
      pool.emplace_back([&, begin, end] {
        try {
          for (std::size_t i = begin; i < end; ++i)
            result.ttf_samples[i] = device_ttf(cfg, shifted, i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  std::size_t failed = 0;
  for (double ttf : result.ttf_samples)
    if (ttf < cfg.mission_lifetime) ++failed;
  const double n = static_cast<double>(cfg.n_samples);
  const double p = static_cast<double>(failed) / n;
  result.infection_fraction = p;
  result.infection_ci_halfwidth = 3.0 * std::sqrt(p * (1.0 - p) / n);

  std::vector<double> sorted = result.ttf_samples;
  std::sort(sorted.begin(), sorted.end());
  for (double q : {0.01, 0.1, 0.5, 0.9})
    result.quantiles[q] = interpolated_quantile(sorted, q);
  return result;
}

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double infection_probability_analytic(const ParameterDistribution& dist,
                                      const TrojanShift* shift,
                                      const MonotoneTtfMap& map,
                                      double mission_lifetime) {
  const double mean = dist.mean + (shift ? shift->delta_mean : 0.0);
  const double sigma = dist.sigma * (shift ? shift->sigma_scale : 1.0);

  if (sigma == 0.0)
    return map.ttf_of_param(mean) < mission_lifetime ? 1.0 : 0.0;

  double lo = mean - 12.0 * sigma;
  double hi = mean + 12.0 * sigma;
  if (dist.floor && lo <= *dist.floor)
    lo = std::nextafter(*dist.floor, hi);

  // Verify declared monotonicity on a coarse grid across the support.
  constexpr int kGrid = 16;
  double prev = map.ttf_of_param(lo);
  int direction = 0;  // +1 increasing, -1 decreasing
  for (int i = 1; i <= kGrid; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / kGrid;
    const double y = map.ttf_of_param(x);
    if (y > prev) {
      if (direction < 0)
        throw NumericError("infection_probability_analytic: map is not monotone");
      direction = +1;
    } else if (y < prev) {
      if (direction > 0)
        throw NumericError("infection_probability_analytic: map is not monotone");
      direction = -1;
    }
    prev = y;
  }
  if (direction == 0)
    throw NumericError("infection_probability_analytic: map is constant");

  const auto ttf = [&](double x) { return map.ttf_of_param(x); };
  const double f_lo = ttf(lo);
  const double f_hi = ttf(hi);

  const double z_floor =
      dist.floor ? (*dist.floor - mean) / sigma
                 : -std::numeric_limits<double>::infinity();
  const double mass_above_floor =
      dist.floor ? 1.0 - normal_cdf(z_floor) : 1.0;

  // Locate the parameter value whose TTF equals the mission lifetime.
  double threshold;
  const bool lo_fails = f_lo < mission_lifetime;
  const bool hi_fails = f_hi < mission_lifetime;
  if (lo_fails == hi_fails) {
    // No crossing inside the bracket: the failing set is (at most) the
    // mass beyond the bracket edge.
    threshold = lo_fails ? (direction > 0 ? hi : lo)
                         : (direction > 0 ? lo : hi);
  } else {
    double a = lo, b = hi;
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (a + b);
      if ((ttf(mid) < mission_lifetime) == lo_fails)
        a = mid;
      else
        b = mid;
      if (std::abs(b - a) <=
          1e-12 * (std::abs(a) + std::abs(b) + 1e-300))
        break;
    }
    threshold = 0.5 * (a + b);
  }

  const double z = (threshold - mean) / sigma;
  double p;
  if (direction > 0) {
    // TTF increasing in the parameter: devices fail below the threshold.
    const double below = normal_cdf(z) - (dist.floor ? normal_cdf(z_floor) : 0.0);
    p = std::max(0.0, below) / mass_above_floor;
  } else {
    p = (1.0 - normal_cdf(std::max(z, z_floor))) / mass_above_floor;
  }
  return std::clamp(p, 0.0, 1.0);
}

double weibull_sample(const WeibullParams& p, RngStream& rng) {
  const double u = rng.next_uniform();  // in (0, 1]
  return p.scale_eta * std::pow(-std::log(u), 1.0 / p.shape_beta);
}

double weibull_log_likelihood(const WeibullParams& p,
                              const std::vector<double>& ttf_samples) {
  const double beta = p.shape_beta;
  const double eta = p.scale_eta;
  double ll = 0.0;
  for (double t : ttf_samples) {
    const double z = t / eta;
    ll += std::log(beta / eta) + (beta - 1.0) * std::log(z) -
          std::pow(z, beta);
  }
  return ll;
}

WeibullParams weibull_mle_fit(const std::vector<double>& ttf_samples) {
  const std::size_t n = ttf_samples.size();
  if (n < 10)
    throw ConfigError("weibull_mle_fit: need at least 10 samples");
  double t_max = 0.0;
  for (double t : ttf_samples) {
    if (!(t > 0.0))
      throw ConfigError("weibull_mle_fit: all samples must be > 0");
    t_max = std::max(t_max, t);
  }
  // Scale-invariant profile equation; work with t/t_max for stability.
  std::vector<double> u(n), log_u(n);
  bool all_equal = true;
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = ttf_samples[i] / t_max;
    log_u[i] = std::log(u[i]);
    if (ttf_samples[i] != ttf_samples[0]) all_equal = false;
  }
  if (all_equal)
    throw NumericError("weibull_mle_fit: degenerate data, all samples equal");

  double mean_log = 0.0;
  for (double l : log_u) mean_log += l;
  mean_log /= static_cast<double>(n);

  // g(beta) = sum(u^b ln u)/sum(u^b) - 1/b - mean(ln u); g is increasing.
  const auto g_and_slope = [&](double beta, double& g, double& dg) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = std::pow(u[i], beta);
      s0 += w;
      s1 += w * log_u[i];
      s2 += w * log_u[i] * log_u[i];
    }
    g = s1 / s0 - 1.0 / beta - mean_log;
    dg = (s2 * s0 - s1 * s1) / (s0 * s0) + 1.0 / (beta * beta);
  };

  // Bracket the root, then safeguarded Newton.
  double lo = 1e-3, hi = 1.0;
  double g, dg;
  g_and_slope(hi, g, dg);
  int expand = 0;
  while (g < 0.0 && expand++ < 40) {
    lo = hi;
    hi *= 2.0;
    g_and_slope(hi, g, dg);
  }
  if (g < 0.0)
    throw NumericError("weibull_mle_fit: failed to bracket the shape parameter");

  double beta = 0.5 * (lo + hi);
  bool converged = false;
  for (int iter = 0; iter < 200; ++iter) {
    g_and_slope(beta, g, dg);
    if (g > 0.0) hi = beta; else lo = beta;
    double next = beta - g / dg;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - beta);
    beta = next;
    if (step < 1e-10 * beta) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NumericError("weibull_mle_fit: shape estimate did not converge");

  double s0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) s0 += std::pow(u[i], beta);
  const double eta =
      t_max * std::pow(s0 / static_cast<double>(n), 1.0 / beta);
  return {beta, eta};
}

}  // namespace wearsim

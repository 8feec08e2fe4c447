#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wearsim/mechanism.hpp"

namespace wearsim {

// Counter-based deterministic RNG. Each (seed, stream) pair yields an
// independent substream, so per-device draws are identical regardless of
// how devices are partitioned across workers.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double next_uniform();   // in (0, 1]
  double next_normal();    // standard normal, Box-Muller

 private:
  std::uint64_t state_;
};

// Which model input a varied process parameter feeds.
enum class Binding {
  OxideThickness,       // OB: d_ox, field derived from gate voltage
  OxideField,           // OB: E_ox directly
  SubstrateCurrent,     // HCI
  CurrentDensity,       // EM
  EmActivationEnergy,   // EM
  NbtiActivationEnergy, // NBTI
  GateVoltage,          // NBTI, OB-via-thickness
  Temperature,          // any mechanism
};

std::string to_string(Binding b);
Binding binding_from_string(const std::string& s);
bool binding_compatible(Binding b, Mechanism m);

// A named process parameter: nominal normal distribution plus its wiring
// into a model input. `floor` is an optional physical lower bound enforced
// by rejection sampling.
struct ParameterDistribution {
  std::string name;
  double mean = 0.0;
  double sigma = 0.0;
  Binding target = Binding::OxideThickness;
  std::optional<double> floor;
};

// Malicious shift of one process parameter's distribution.
struct TrojanShift {
  std::string parameter_name;
  double delta_mean = 0.0;
  double sigma_scale = 1.0;
};

struct WeibullParams {
  double shape_beta = 1.0;
  double scale_eta = 1.0;
};

struct PopulationResult {
  std::vector<double> ttf_samples;
  std::map<double, double> quantiles;  // {0.01, 0.1, 0.5, 0.9}
  double infection_fraction = 0.0;
  double infection_ci_halfwidth = 0.0;  // 3-sigma binomial half width
  std::uint64_t seed = 0;
  std::size_t sample_count = 0;
};

// Draw one value from the (optionally shifted, optionally truncated)
// distribution. Redraws up to 100 times below the floor.
double sample_parameter(const ParameterDistribution& dist,
                        const TrojanShift* shift, RngStream& rng);

// Mechanism lifetime with the bound input overridden by `value`; all other
// inputs taken from params/base.
double map_param_to_ttf(Mechanism m, const MechanismParams& params,
                        const BaseCondition& base, double value, Binding b);

struct PopulationConfig {
  Mechanism mechanism = Mechanism::OxideBreakdown;
  MechanismParams params;
  BaseCondition base;
  std::vector<ParameterDistribution> distributions;
  std::vector<TrojanShift> shifts;
  double mission_lifetime = 87600.0;  // 10 years in hours
  std::size_t n_samples = 1;
  std::uint64_t seed = 0;
};

// One device's parameter draws (in declared distribution order) and the
// resulting TTF. Deterministic in (cfg.seed, device_index).
struct DeviceDraw {
  std::vector<double> parameter_values;
  double ttf = 0.0;
};

DeviceDraw sample_device(const PopulationConfig& cfg, bool shifted,
                         std::uint64_t device_index);

// Per-device parameter draws mapped to TTFs. For oxide breakdown with
// weibull_shape > 0 the computed lifetime becomes the Weibull scale via
// eta = MTTF / Gamma(1 + 1/beta) and the device TTF is a Weibull draw;
// otherwise the deterministic lifetime is the TTF. Deterministic for a
// given (seed, n) regardless of worker count (WEARSIM_THREADS).
PopulationResult monte_carlo_population(const PopulationConfig& cfg,
                                        bool shifted);

// Strictly monotone parameter -> TTF map over the distribution's support.
struct MonotoneTtfMap {
  std::function<double(double)> ttf_of_param;
};

// Normal-tail infection probability: inverts the mission threshold through
// the monotone map by bisection and returns the corresponding (truncated)
// normal tail mass.
double infection_probability_analytic(const ParameterDistribution& dist,
                                      const TrojanShift* shift,
                                      const MonotoneTtfMap& map,
                                      double mission_lifetime);

// Inverse-CDF Weibull draw: eta * (-ln(1-U))^(1/beta).
double weibull_sample(const WeibullParams& p, RngStream& rng);

// Maximum-likelihood Weibull fit via the one-dimensional profile-likelihood
// equation for beta (safeguarded Newton/bisection), then eta in closed form.
WeibullParams weibull_mle_fit(const std::vector<double>& ttf_samples);

double weibull_log_likelihood(const WeibullParams& p,
                              const std::vector<double>& ttf_samples);

// Standard normal CDF.
double normal_cdf(double z);

}  // namespace wearsim

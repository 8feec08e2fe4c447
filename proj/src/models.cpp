#include "wearsim/models.hpp"

#include <cmath>

namespace wearsim {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw DomainError(msg);
}

double arrhenius(double ea_eV, double temperature_K) {
  return std::exp(ea_eV / (k_boltzmann_eV_per_K * temperature_K));
}

}  // namespace

double hci_failure_rate(const OperatingPoint& op, const HciParams& p) {
  require(op.drain_current_A > 0.0, "hci_failure_rate: drain current must be > 0");
  require(op.substrate_current_A >= 0.0,
          "hci_failure_rate: substrate current must be >= 0");
  const double ratio = op.substrate_current_A / op.drain_current_A;
  return p.b_scale * op.drain_current_A * std::pow(ratio, p.m_exponent);
}

double hci_mttf(const OperatingPoint& op, const HciParams& p) {
  require(op.substrate_current_A > 0.0, "hci_mttf: substrate current must be > 0");
  require(op.temperature_K > 0.0, "hci_mttf: temperature must be > 0");
  return p.b_scale * std::pow(op.substrate_current_A, -p.n_exponent) *
         arrhenius(p.ea_eV, op.temperature_K);
}

double hci_vth_shift(const OperatingPoint& op, const HciParams& p) {
  require(op.stress_time >= 0.0, "hci_vth_shift: stress time must be >= 0");
  if (op.stress_time == 0.0 && p.n_prime > 0.0) return 0.0;
  // phi_it/(q lambda E_m) with phi_it in eV cancels q: phi_eV/(lambda E_m).
  const double trap_term =
      std::exp(-p.phi_it_eV / (p.lambda_mfp_cm * p.e_m_Vcm));
  return p.vth_prefactor * std::sqrt(p.q_inversion) *
         std::exp(p.e_ox_Vcm / p.e0_Vcm) * trap_term *
         std::pow(op.stress_time, p.n_prime);
}

double oxide_field(double voltage_V, double d_ox_cm) {
  require(d_ox_cm > 0.0, "oxide_field: oxide thickness must be > 0");
  return voltage_V / d_ox_cm;
}

double time_to_breakdown(double e_ox_Vcm, const ObParams& p) {
  switch (p.variant) {
    case ObVariant::E_MODEL:
      return p.tau0 * std::exp(-p.gamma * e_ox_Vcm);
    case ObVariant::INV_E_MODEL:
      require(e_ox_Vcm > 0.0, "time_to_breakdown: 1/E model needs E_ox > 0");
      return p.tau0 * std::exp(p.gamma / e_ox_Vcm);
    default:
      throw BindingError(
          "time_to_breakdown: variant must be E_MODEL or INV_E_MODEL");
  }
}

double mttf_ob_thin(double e_ox_Vcm, double temperature_K, const ObParams& p) {
  require(e_ox_Vcm > 0.0, "mttf_ob_thin: oxide field must be > 0");
  require(temperature_K > 0.0, "mttf_ob_thin: temperature must be > 0");
  if (p.variant != ObVariant::THIN_ARRHENIUS)
    throw BindingError("mttf_ob_thin: variant must be THIN_ARRHENIUS");
  return p.a_scale * std::exp(p.b_field_Vcm / e_ox_Vcm) *
         arrhenius(p.ea_eV, temperature_K);
}

double mttf_ob_ultrathin(double temperature_K, const ObParams& p) {
  require(temperature_K > 0.0, "mttf_ob_ultrathin: temperature must be > 0");
  if (p.variant != ObVariant::ULTRA_THIN)
    throw BindingError("mttf_ob_ultrathin: variant must be ULTRA_THIN");
  return p.t_bd0 * std::exp(p.a_coeff_K / temperature_K +
                            p.b_coeff_K2 / (temperature_K * temperature_K));
}

double mttf_em(const OperatingPoint& op, const EmParams& p) {
  require(op.current_density_A_cm2 > 0.0, "mttf_em: current density must be > 0");
  require(op.temperature_K > 0.0, "mttf_em: temperature must be > 0");
  return p.a_scale * std::pow(op.current_density_A_cm2, -p.n_exponent) *
         arrhenius(p.ea_eV, op.temperature_K);
}

double nbti_vth_shift(const OperatingPoint& op, const NbtiParams& p) {
  require(op.stress_time >= 0.0, "nbti_vth_shift: stress time must be >= 0");
  require(op.temperature_K > 0.0, "nbti_vth_shift: temperature must be > 0");
  if (op.stress_time == 0.0) return 0.0;
  return p.a0 * std::pow(std::abs(op.gate_voltage_V), p.gamma_v) *
         std::pow(op.stress_time, p.beta_t) *
         arrhenius(-p.e_nb_eV, op.temperature_K);
}

double nbti_lifetime(const OperatingPoint& op, const NbtiParams& p) {
  require(op.temperature_K > 0.0, "nbti_lifetime: temperature must be > 0");
  const double amplitude =
      p.a0 * std::pow(std::abs(op.gate_voltage_V), p.gamma_v);
  if (amplitude <= 0.0)
    throw DomainError("nbti_lifetime: shift amplitude is zero, criterion unreachable");
  const double scaled = p.vth_crit_V *
                        arrhenius(p.e_nb_eV, op.temperature_K) / amplitude;
  return std::pow(scaled, 1.0 / p.beta_t);
}

double duty_cycle_rate(const Waveform& w, const HciParams& p) {
  if (w.samples.size() < 2)
    throw ConfigError("duty_cycle_rate: waveform needs at least 2 samples");
  if (!(w.period > 0.0))
    throw ConfigError("duty_cycle_rate: period must be > 0");
  if (w.samples.front().time != 0.0)
    throw ConfigError("duty_cycle_rate: first sample time must be 0");
  if (w.samples.back().time > w.period)
    throw ConfigError("duty_cycle_rate: samples must not pass the period end");

  double integral = 0.0;
  double prev_t = w.samples.front().time;
  double prev_rate = hci_failure_rate(w.samples.front().op, p);
  for (std::size_t i = 1; i < w.samples.size(); ++i) {
    const double t = w.samples[i].time;
    if (t <= prev_t)
      throw ConfigError("duty_cycle_rate: sample times must be strictly increasing");
    const double rate = hci_failure_rate(w.samples[i].op, p);
    integral += 0.5 * (prev_rate + rate) * (t - prev_t);
    prev_t = t;
    prev_rate = rate;
  }
  // Hold the last sampled rate to the end of the cycle.
  integral += prev_rate * (w.period - prev_t);
  return integral / w.period;
}

}  // namespace wearsim

#pragma once

#include <vector>

#include "wearsim/constants.hpp"
#include "wearsim/errors.hpp"

namespace wearsim {

// Stress condition at which a lifetime model is evaluated. Temperatures are
// Kelvin internally; fields V/cm; current density A/cm^2. The time unit is
// whatever unit the model prefactors are expressed in.
struct OperatingPoint {
  double temperature_K = 300.0;
  double gate_voltage_V = 0.0;
  double drain_current_A = 0.0;
  double substrate_current_A = 0.0;
  double current_density_A_cm2 = 0.0;
  double stress_time = 0.0;
};

// Hot-carrier-injection constants. b_scale absorbs the damage prefactor and
// device width; ea_eV is negative by convention for HCI (typ. -0.1..-0.2 eV).
struct HciParams {
  double b_scale = 1.0;
  double m_exponent = 3.0;
  double n_exponent = 3.0;   // typical range [2, 4]
  double ea_eV = -0.15;
  double vth_prefactor = 1.0;
  double q_inversion = 1.0;
  double e_ox_Vcm = 0.0;
  double e0_Vcm = 1.0;
  double phi_it_eV = 0.0;
  double lambda_mfp_cm = 1.0;
  double e_m_Vcm = 1.0;
  double n_prime = 0.5;
};

enum class ObVariant { E_MODEL, INV_E_MODEL, THIN_ARRHENIUS, ULTRA_THIN };

// Oxide-breakdown constants. The variant selects which fields are consulted.
// weibull_shape > 0 makes population TTFs Weibull-distributed around the
// computed lifetime; 0 selects exact-deterministic TTFs.
struct ObParams {
  ObVariant variant = ObVariant::THIN_ARRHENIUS;
  double tau0 = 1.0;
  double gamma = 1.0;
  double a_scale = 1.0;
  double b_field_Vcm = 1.0;
  double ea_eV = 0.0;
  double t_bd0 = 1.0;
  double a_coeff_K = 0.0;
  double b_coeff_K2 = 0.0;
  double weibull_shape = 1.0;
};

// Black-form electromigration constants.
struct EmParams {
  double a_scale = 1.0;
  double n_exponent = 1.5;   // typical range (1, 2)
  double ea_eV = 0.7;        // typical 0.5 - 1.4 eV
};

// NBTI threshold-shift constants: dVth = a0 |Vg|^gamma_v t^beta exp(-E_NB/kT).
struct NbtiParams {
  double a0 = 0.1;
  double gamma_v = 1.0;
  double beta_t = 0.25;
  double e_nb_eV = 0.1;
  double vth_crit_V = 0.05;
};

struct WaveformSample {
  double time = 0.0;
  OperatingPoint op;
};

// One cycle of a periodic stress profile. Sample times must be strictly
// increasing, start at 0 and end at or before `period`.
struct Waveform {
  std::vector<WaveformSample> samples;
  double period = 0.0;
};

// HCI failure rate: lambda = B I_drain (I_sub / I_drain)^m.
double hci_failure_rate(const OperatingPoint& op, const HciParams& p);

// Substrate-current HCI lifetime: B I_sub^-N exp(Ea / kT).
double hci_mttf(const OperatingPoint& op, const HciParams& p);

// Power-law HCI threshold shift:
//   dVth = c sqrt(Q_i) exp(E_ox/E_o) exp(-phi_it/(lambda E_m)) t^n'.
double hci_vth_shift(const OperatingPoint& op, const HciParams& p);

// Oxide field E_ox = V / d_ox.
double oxide_field(double voltage_V, double d_ox_cm);

// Thick-oxide time to breakdown: tau0 exp(-gamma E) (E model) or
// tau0 exp(+gamma / E) (1/E model).
double time_to_breakdown(double e_ox_Vcm, const ObParams& p);

// Thin-oxide lifetime: A exp(B / E_ox) exp(Ea / kT).
double mttf_ob_thin(double e_ox_Vcm, double temperature_K, const ObParams& p);

// Ultra-thin-oxide lifetime: T_BD0 exp(a/T + b/T^2), coefficients
// pre-evaluated at the operating voltage.
double mttf_ob_ultrathin(double temperature_K, const ObParams& p);

// Black-form electromigration lifetime: A j^-n exp(Ea / kT).
double mttf_em(const OperatingPoint& op, const EmParams& p);

// NBTI threshold shift at the given stress time and temperature.
double nbti_vth_shift(const OperatingPoint& op, const NbtiParams& p);

// Time at which nbti_vth_shift reaches p.vth_crit_V (analytic inversion).
double nbti_lifetime(const OperatingPoint& op, const NbtiParams& p);

// Cycle-averaged HCI failure rate: (1/period) * integral of
// hci_failure_rate over one cycle, trapezoidal over the supplied samples
// with the last sample's rate held to the period end.
double duty_cycle_rate(const Waveform& w, const HciParams& p);

}  // namespace wearsim

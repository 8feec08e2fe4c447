#include "wearsim/scenario.hpp"

#include <set>
#include <sstream>

namespace wearsim {

namespace {

void check_positive(std::vector<Diagnostic>& diags, double value,
                    const char* what) {
  if (!(value > 0.0)) {
    std::ostringstream msg;
    msg << what << " must be > 0 (got " << value << ")";
    diags.push_back({Severity::Error, msg.str()});
  }
}

void check_model_params(std::vector<Diagnostic>& diags,
                        const TrojanScenario& s) {
  switch (s.mechanism) {
    case Mechanism::Hci: {
      const auto& p = std::get<HciParams>(s.model_params);
      check_positive(diags, p.b_scale, "hci b_scale");
      check_positive(diags, p.m_exponent, "hci m_exponent");
      check_positive(diags, p.lambda_mfp_cm, "hci lambda_mfp_cm");
      check_positive(diags, p.e_m_Vcm, "hci e_m_Vcm");
      check_positive(diags, p.e0_Vcm, "hci e0_Vcm");
      if (p.n_exponent < 2.0 || p.n_exponent > 4.0)
        diags.push_back({Severity::Warning,
                         "hci n_exponent outside typical [2, 4]"});
      check_positive(diags, s.base.op.substrate_current_A,
                     "hci substrate current");
      break;
    }
    case Mechanism::OxideBreakdown: {
      const auto& p = std::get<ObParams>(s.model_params);
      if (p.weibull_shape < 0.0)
        diags.push_back({Severity::Error, "ob weibull_shape must be >= 0"});
      switch (p.variant) {
        case ObVariant::E_MODEL:
        case ObVariant::INV_E_MODEL:
          check_positive(diags, p.tau0, "ob tau0");
          break;
        case ObVariant::THIN_ARRHENIUS:
          check_positive(diags, p.a_scale, "ob a_scale");
          break;
        case ObVariant::ULTRA_THIN:
          check_positive(diags, p.t_bd0, "ob t_bd0");
          break;
      }
      if (p.variant != ObVariant::ULTRA_THIN) {
        bool field_bound = false;
        for (const auto& d : s.distributions)
          if (d.target == Binding::OxideThickness ||
              d.target == Binding::OxideField)
            field_bound = true;
        if (!field_bound && !s.base.e_ox_Vcm && s.base.d_ox_cm <= 0.0)
          diags.push_back({Severity::Error,
                           "ob scenario has no oxide field source "
                           "(e_ox_Vcm, d_ox_cm or a bound parameter)"});
      }
      break;
    }
    case Mechanism::Electromigration: {
      const auto& p = std::get<EmParams>(s.model_params);
      check_positive(diags, p.a_scale, "em a_scale");
      if (p.n_exponent <= 1.0 || p.n_exponent >= 2.0)
        diags.push_back({Severity::Warning,
                         "em n_exponent outside typical (1, 2)"});
      bool j_bound = false, ea_bound = false;
      for (const auto& d : s.distributions) {
        if (d.target == Binding::CurrentDensity) j_bound = true;
        if (d.target == Binding::EmActivationEnergy) ea_bound = true;
      }
      if (!j_bound)
        check_positive(diags, s.base.op.current_density_A_cm2,
                       "em current density");
      if (!ea_bound && !(p.ea_eV > 0.0))
        diags.push_back({Severity::Error, "em ea_eV must be > 0"});
      break;
    }
    case Mechanism::Nbti: {
      const auto& p = std::get<NbtiParams>(s.model_params);
      check_positive(diags, p.a0, "nbti a0");
      check_positive(diags, p.beta_t, "nbti beta_t");
      check_positive(diags, p.e_nb_eV, "nbti e_nb_eV");
      check_positive(diags, p.vth_crit_V, "nbti vth_crit_V");
      break;
    }
  }
}

}  // namespace

bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.severity == Severity::Error) return true;
  return false;
}

std::vector<Diagnostic> validate_scenario(const TrojanScenario& s) {
  std::vector<Diagnostic> diags;
  if (!(s.mission_lifetime > 0.0))
    diags.push_back({Severity::Error, "mission lifetime must be > 0"});
  if (s.n_samples < 1)
    diags.push_back({Severity::Error, "n_samples must be >= 1"});
  check_positive(diags, s.base.op.temperature_K, "temperature_K");

  std::set<std::string> names;
  for (const auto& d : s.distributions) {
    if (!names.insert(d.name).second)
      diags.push_back({Severity::Error,
                       "duplicate parameter name '" + d.name + "'"});
    if (d.sigma < 0.0)
      diags.push_back({Severity::Error,
                       "parameter '" + d.name + "' has sigma < 0"});
    if (d.floor && !(d.mean > *d.floor))
      diags.push_back({Severity::Error,
                       "parameter '" + d.name +
                           "' mean must lie above the truncation floor"});
    if (!binding_compatible(d.target, s.mechanism))
      diags.push_back({Severity::Error,
                       "parameter '" + d.name + "' target '" +
                           to_string(d.target) +
                           "' is incompatible with mechanism '" +
                           to_string(s.mechanism) + "'"});
  }
  for (const auto& shift : s.shifts) {
    if (!names.count(shift.parameter_name))
      diags.push_back({Severity::Error,
                       "shift references undeclared parameter '" +
                           shift.parameter_name + "'"});
    if (shift.sigma_scale < 0.0)
      diags.push_back({Severity::Error,
                       "shift of '" + shift.parameter_name +
                           "' has sigma_scale < 0"});
  }
  check_model_params(diags, s);
  return diags;
}

namespace {

PopulationConfig to_population_config(const TrojanScenario& s) {
  PopulationConfig cfg;
  cfg.mechanism = s.mechanism;
  cfg.params = s.model_params;
  cfg.base = s.base;
  cfg.distributions = s.distributions;
  cfg.shifts = s.shifts;
  cfg.mission_lifetime = s.mission_lifetime;
  cfg.n_samples = s.n_samples;
  cfg.seed = s.seed;
  return cfg;
}

// Analytic cross-check applies only when the population has a single varied
// parameter and no intrinsic TTF randomness.
bool analytic_applicable(const TrojanScenario& s) {
  if (s.distributions.size() != 1) return false;
  if (s.mechanism == Mechanism::OxideBreakdown &&
      std::get<ObParams>(s.model_params).weibull_shape > 0.0)
    return false;
  return true;
}

}  // namespace

ScenarioReport run_scenario(const TrojanScenario& s) {
  const auto diags = validate_scenario(s);
  if (has_errors(diags)) {
    std::ostringstream msg;
    msg << "invalid scenario";
    if (!s.label.empty()) msg << " '" << s.label << "'";
    for (const auto& d : diags)
      msg << "\n  " << (d.severity == Severity::Error ? "error: " : "warning: ")
          << d.message;
    throw ConfigError(msg.str());
  }

  const PopulationConfig cfg = to_population_config(s);
  ScenarioReport report;
  report.nominal = monte_carlo_population(cfg, false);
  report.infected = monte_carlo_population(cfg, true);
  report.infection_delta =
      report.infected.infection_fraction - report.nominal.infection_fraction;
  report.mttf_ratio_median =
      report.nominal.quantiles.at(0.5) / report.infected.quantiles.at(0.5);

  for (const auto& shift : s.shifts) {
    PopulationConfig one = cfg;
    one.shifts = {shift};
    const auto pop = monte_carlo_population(one, true);
    report.sensitivity.emplace_back(shift.parameter_name,
                                    pop.infection_fraction);
  }

  if (analytic_applicable(s)) {
    const auto& dist = s.distributions.front();
    MonotoneTtfMap map{[&](double value) {
      return map_param_to_ttf(s.mechanism, s.model_params, s.base, value,
                              dist.target);
    }};
    const TrojanShift* shift = nullptr;
    for (const auto& sh : s.shifts)
      if (sh.parameter_name == dist.name) shift = &sh;
    try {
      report.analytic_nominal = infection_probability_analytic(
          dist, nullptr, map, s.mission_lifetime);
      report.analytic_infected = infection_probability_analytic(
          dist, shift, map, s.mission_lifetime);
    } catch (const NumericError&) {
      report.analytic_nominal.reset();
      report.analytic_infected.reset();
    } catch (const DomainError&) {
      report.analytic_nominal.reset();
      report.analytic_infected.reset();
    }
  }
  return report;
}

}  // namespace wearsim

#include "doctest.h"

#include <cmath>

#include "wearsim/scenario.hpp"

using namespace wearsim;

namespace {

TrojanScenario ob_thin_scenario() {
  TrojanScenario s;
  s.label = "ob thin d_ox";
  s.mechanism = Mechanism::OxideBreakdown;
  ObParams ob;
  ob.variant = ObVariant::THIN_ARRHENIUS;
  ob.a_scale = 1e-3;
  ob.b_field_Vcm = 6e6;
  ob.ea_eV = 0.3;
  ob.weibull_shape = 0.0;
  s.model_params = ob;
  s.base.op.temperature_K = 350.0;
  s.base.op.gate_voltage_V = 3.3;
  ParameterDistribution d;
  d.name = "d_ox";
  d.mean = 5e-7;
  d.sigma = 2.5e-8;
  d.target = Binding::OxideThickness;
  d.floor = 1e-8;
  s.distributions = {d};
  s.shifts = {{"d_ox", -5e-8, 1.0}};
  // Mission between the nominal and shifted central lifetimes.
  BaseCondition nominal = s.base;
  nominal.d_ox_cm = 5e-7;
  BaseCondition shifted = s.base;
  shifted.d_ox_cm = 4.5e-7;
  const double hi = mechanism_ttf(s.mechanism, s.model_params, nominal);
  const double lo = mechanism_ttf(s.mechanism, s.model_params, shifted);
  s.mission_lifetime = std::sqrt(hi * lo);
  s.n_samples = 100000;
  s.seed = 404;
  return s;
}

}  // namespace

TEST_CASE("empty shifts give a bit-identical no-op Trojan") {
  auto s = ob_thin_scenario();
  s.shifts.clear();
  s.n_samples = 5000;
  const auto report = run_scenario(s);
  CHECK(report.nominal.ttf_samples == report.infected.ttf_samples);
  CHECK(report.infection_delta == 0.0);
  CHECK(report.mttf_ratio_median == 1.0);
  CHECK(report.sensitivity.empty());
}

TEST_CASE("deterministic EM two-point scenario") {
  TrojanScenario s;
  s.mechanism = Mechanism::Electromigration;
  s.model_params = EmParams{1.0, 1.5, 1.4};
  s.base.op.temperature_K = 373.15;
  s.base.op.current_density_A_cm2 = 1.0;
  ParameterDistribution d;
  d.name = "ea_em";
  d.mean = 1.4;
  d.sigma = 0.0;
  d.target = Binding::EmActivationEnergy;
  s.distributions = {d};
  s.shifts = {{"ea_em", -0.7, 1.0}};
  const double k = k_boltzmann_eV_per_K;
  const double ttf_nominal = std::exp(1.4 / (k * 373.15));
  const double ttf_infected = std::exp(0.7 / (k * 373.15));
  s.mission_lifetime = std::sqrt(ttf_nominal * ttf_infected);
  s.n_samples = 100;
  const auto report = run_scenario(s);
  CHECK(report.nominal.infection_fraction == 0.0);
  CHECK(report.infected.infection_fraction == 1.0);
  CHECK(report.infection_delta == 1.0);
}

TEST_CASE("OB scenario matches the analytic tail within 3 sigma") {
  const auto s = ob_thin_scenario();
  const auto report = run_scenario(s);
  REQUIRE(report.analytic_nominal.has_value());
  REQUIRE(report.analytic_infected.has_value());
  const double n = static_cast<double>(s.n_samples);
  for (const auto& [mc, analytic] :
       {std::pair{report.nominal.infection_fraction, *report.analytic_nominal},
        std::pair{report.infected.infection_fraction,
                  *report.analytic_infected}}) {
    const double spread = std::max(analytic * (1.0 - analytic), 1e-12);
    CHECK(std::abs(mc - analytic) <= 3.0 * std::sqrt(spread / n) + 1e-9);
  }
  // The shift moves d_ox toward failure.
  CHECK(report.infected.infection_fraction >
        report.nominal.infection_fraction);
}

TEST_CASE("scenario runs are deterministic in (scenario, seed)") {
  auto s = ob_thin_scenario();
  s.n_samples = 20000;
  const auto a = run_scenario(s);
  const auto b = run_scenario(s);
  CHECK(a.nominal.ttf_samples == b.nominal.ttf_samples);
  CHECK(a.infected.ttf_samples == b.infected.ttf_samples);
  CHECK(a.infection_delta == b.infection_delta);

  // The nominal population ignores the shifts list entirely.
  auto no_shift = s;
  no_shift.shifts.clear();
  const auto c = run_scenario(no_shift);
  CHECK(c.nominal.ttf_samples == a.nominal.ttf_samples);
}

TEST_CASE("joint shifts dominate single shifts on monotone scenarios") {
  // Two parameters, both monotone toward failure: j up, Ea down.
  TrojanScenario s;
  s.mechanism = Mechanism::Electromigration;
  s.model_params = EmParams{1e9, 1.5, 0.9};
  s.base.op.temperature_K = 350.0;
  ParameterDistribution j;
  j.name = "j_e";
  j.mean = 1e5;
  j.sigma = 5e3;
  j.target = Binding::CurrentDensity;
  j.floor = 1.0;
  ParameterDistribution ea;
  ea.name = "ea_em";
  ea.mean = 0.9;
  ea.sigma = 0.02;
  ea.target = Binding::EmActivationEnergy;
  ea.floor = 0.01;
  s.distributions = {j, ea};
  s.shifts = {{"j_e", 1e4, 1.0}, {"ea_em", -0.05, 1.0}};
  BaseCondition mid = s.base;
  mid.op.current_density_A_cm2 = 1.1e5;
  s.mission_lifetime =
      mechanism_ttf(s.mechanism, EmParams{1e9, 1.5, 0.88}, mid);
  s.n_samples = 20000;
  s.seed = 5;
  const auto report = run_scenario(s);
  REQUIRE(report.sensitivity.size() == 2);
  for (const auto& [name, fraction] : report.sensitivity)
    CHECK(report.infected.infection_fraction >= fraction);
}

TEST_CASE("validate_scenario diagnostics") {
  auto s = ob_thin_scenario();
  CHECK(validate_scenario(s).empty());

  auto bad = s;
  bad.shifts.push_back({"not_declared", 1.0, 1.0});
  const auto diags = validate_scenario(bad);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].severity == Severity::Error);
  CHECK(has_errors(diags));
  CHECK_THROWS_AS(run_scenario(bad), ConfigError);

  // Out-of-typical-range EM exponent warns but does not block.
  TrojanScenario em;
  em.mechanism = Mechanism::Electromigration;
  em.model_params = EmParams{1.0, 3.0, 0.7};
  em.base.op.temperature_K = 350.0;
  em.base.op.current_density_A_cm2 = 1e5;
  const auto warn = validate_scenario(em);
  REQUIRE(warn.size() == 1);
  CHECK(warn[0].severity == Severity::Warning);
  CHECK(!has_errors(warn));
}

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wearsim/stochastic.hpp"

namespace wearsim {

// A complete Trojan experiment: one mechanism, a nominal process-parameter
// population and the malicious shifts applied to it.
struct TrojanScenario {
  std::string label;
  Mechanism mechanism = Mechanism::OxideBreakdown;
  MechanismParams model_params;
  BaseCondition base;
  std::vector<ParameterDistribution> distributions;
  std::vector<TrojanShift> shifts;
  double mission_lifetime = 87600.0;
  std::size_t n_samples = 10000;
  std::uint64_t seed = 0;
};

enum class Severity { Warning, Error };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
};

// Empty iff the scenario satisfies all invariants. Out-of-typical-range
// constants produce warnings; structural violations produce errors.
std::vector<Diagnostic> validate_scenario(const TrojanScenario& s);

bool has_errors(const std::vector<Diagnostic>& diags);

struct ScenarioReport {
  PopulationResult nominal;
  PopulationResult infected;
  double infection_delta = 0.0;
  double mttf_ratio_median = 0.0;  // nominal median / infected median
  // shift parameter name -> infection fraction with only that shift applied
  std::vector<std::pair<std::string, double>> sensitivity;
  // Analytic cross-check, present for monotone single-parameter scenarios
  // with deterministic TTFs.
  std::optional<double> analytic_nominal;
  std::optional<double> analytic_infected;
};

// Runs the nominal and infected populations with a shared seed, then one
// population per individual shift for the sensitivity table. Rejects
// invalid scenarios with ConfigError listing every diagnostic.
ScenarioReport run_scenario(const TrojanScenario& s);

}  // namespace wearsim

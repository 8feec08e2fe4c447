#pragma once

#include <optional>
#include <string>
#include <variant>

#include "wearsim/models.hpp"

namespace wearsim {

enum class Mechanism { Hci, OxideBreakdown, Electromigration, Nbti };

std::string to_string(Mechanism m);
Mechanism mechanism_from_string(const std::string& s);

using MechanismParams = std::variant<HciParams, ObParams, EmParams, NbtiParams>;

// Baseline evaluation condition for a device. For oxide-breakdown variants
// that need a field, e_ox_Vcm takes precedence when set, otherwise the
// field is derived from gate_voltage_V and d_ox_cm.
struct BaseCondition {
  OperatingPoint op;
  double d_ox_cm = 0.0;
  std::optional<double> e_ox_Vcm;
};

// Resolve the oxide field for an OB evaluation (direct field or Eq. of
// voltage over thickness).
double resolve_oxide_field(const BaseCondition& base);

// Lifetime of a device under `base` for the chosen mechanism: hci_mttf,
// the OB variant's t_BD/MTTF, mttf_em or nbti_lifetime.
double mechanism_ttf(Mechanism m, const MechanismParams& params,
                     const BaseCondition& base);

// MTTF(use) / MTTF(stress) with per-condition parameter sets.
double acceleration_factor(Mechanism m,
                           const MechanismParams& params_stress,
                           const BaseCondition& stress,
                           const MechanismParams& params_use,
                           const BaseCondition& use);

// Common case: same constants at both conditions.
double acceleration_factor(Mechanism m, const MechanismParams& params,
                           const BaseCondition& stress,
                           const BaseCondition& use);

}  // namespace wearsim

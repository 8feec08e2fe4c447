#include "wearsim/mechanism.hpp"

namespace wearsim {

std::string to_string(Mechanism m) {
  switch (m) {
    case Mechanism::Hci: return "hci";
    case Mechanism::OxideBreakdown: return "ob";
    case Mechanism::Electromigration: return "em";
    case Mechanism::Nbti: return "nbti";
  }
  throw BindingError("unknown mechanism");
}

Mechanism mechanism_from_string(const std::string& s) {
  if (s == "hci") return Mechanism::Hci;
  if (s == "ob") return Mechanism::OxideBreakdown;
  if (s == "em") return Mechanism::Electromigration;
  if (s == "nbti") return Mechanism::Nbti;
  throw ConfigError("unknown mechanism '" + s + "' (expected hci|ob|em|nbti)");
}

double resolve_oxide_field(const BaseCondition& base) {
  if (base.e_ox_Vcm) return *base.e_ox_Vcm;
  return oxide_field(base.op.gate_voltage_V, base.d_ox_cm);
}

double mechanism_ttf(Mechanism m, const MechanismParams& params,
                     const BaseCondition& base) {
  switch (m) {
    case Mechanism::Hci:
      return hci_mttf(base.op, std::get<HciParams>(params));
    case Mechanism::OxideBreakdown: {
      const auto& p = std::get<ObParams>(params);
      switch (p.variant) {
        case ObVariant::E_MODEL:
        case ObVariant::INV_E_MODEL:
          return time_to_breakdown(resolve_oxide_field(base), p);
        case ObVariant::THIN_ARRHENIUS:
          return mttf_ob_thin(resolve_oxide_field(base), base.op.temperature_K, p);
        case ObVariant::ULTRA_THIN:
          return mttf_ob_ultrathin(base.op.temperature_K, p);
      }
      throw BindingError("unknown OB variant");
    }
    case Mechanism::Electromigration:
      return mttf_em(base.op, std::get<EmParams>(params));
    case Mechanism::Nbti:
      return nbti_lifetime(base.op, std::get<NbtiParams>(params));
  }
  throw BindingError("unknown mechanism");
}

double acceleration_factor(Mechanism m,
                           const MechanismParams& params_stress,
                           const BaseCondition& stress,
                           const MechanismParams& params_use,
                           const BaseCondition& use) {
  return mechanism_ttf(m, params_use, use) /
         mechanism_ttf(m, params_stress, stress);
}

double acceleration_factor(Mechanism m, const MechanismParams& params,
                           const BaseCondition& stress,
                           const BaseCondition& use) {
  return acceleration_factor(m, params, stress, params, use);
}

}  // namespace wearsim

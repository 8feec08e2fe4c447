#include "wearsim/scenario_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace wearsim {

namespace {

using json = nlohmann::ordered_json;

void reject_unknown_keys(const json& obj, const char* where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) known = true;
    if (!known)
      throw ConfigError(std::string("unknown key '") + key + "' in " + where);
  }
}

double get_number(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number())
    throw ConfigError(std::string("missing or non-numeric '") + key + "'");
  return it->get<double>();
}

double get_number_or(const json& obj, const char* key, double fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number())
    throw ConfigError(std::string("non-numeric '") + key + "'");
  return it->get<double>();
}

ObVariant ob_variant_from_string(const std::string& s) {
  if (s == "e") return ObVariant::E_MODEL;
  if (s == "inv_e") return ObVariant::INV_E_MODEL;
  if (s == "thin") return ObVariant::THIN_ARRHENIUS;
  if (s == "ultrathin") return ObVariant::ULTRA_THIN;
  throw ConfigError("unknown ob variant '" + s +
                    "' (expected e|inv_e|thin|ultrathin)");
}

MechanismParams parse_model_params(Mechanism m, const json& obj) {
  switch (m) {
    case Mechanism::Hci: {
      reject_unknown_keys(obj, "model_params",
                          {"b_scale", "m_exponent", "n_exponent", "ea_eV",
                           "vth_prefactor", "q_inversion", "e_ox_Vcm",
                           "e0_Vcm", "phi_it_eV", "lambda_mfp_cm", "e_m_Vcm",
                           "n_prime"});
      HciParams p;
      p.b_scale = get_number(obj, "b_scale");
      p.m_exponent = get_number_or(obj, "m_exponent", p.m_exponent);
      p.n_exponent = get_number(obj, "n_exponent");
      p.ea_eV = get_number(obj, "ea_eV");
      p.vth_prefactor = get_number_or(obj, "vth_prefactor", p.vth_prefactor);
      p.q_inversion = get_number_or(obj, "q_inversion", p.q_inversion);
      p.e_ox_Vcm = get_number_or(obj, "e_ox_Vcm", p.e_ox_Vcm);
      p.e0_Vcm = get_number_or(obj, "e0_Vcm", p.e0_Vcm);
      p.phi_it_eV = get_number_or(obj, "phi_it_eV", p.phi_it_eV);
      p.lambda_mfp_cm = get_number_or(obj, "lambda_mfp_cm", p.lambda_mfp_cm);
      p.e_m_Vcm = get_number_or(obj, "e_m_Vcm", p.e_m_Vcm);
      p.n_prime = get_number_or(obj, "n_prime", p.n_prime);
      return p;
    }
    case Mechanism::OxideBreakdown: {
      reject_unknown_keys(obj, "model_params",
                          {"variant", "tau0", "gamma", "a_scale",
                           "b_field_Vcm", "ea_eV", "t_bd0", "a_coeff_K",
                           "b_coeff_K2", "weibull_shape"});
      ObParams p;
      if (!obj.contains("variant") || !obj["variant"].is_string())
        throw ConfigError("ob model_params needs a string 'variant'");
      p.variant = ob_variant_from_string(obj["variant"].get<std::string>());
      p.tau0 = get_number_or(obj, "tau0", p.tau0);
      p.gamma = get_number_or(obj, "gamma", p.gamma);
      p.a_scale = get_number_or(obj, "a_scale", p.a_scale);
      p.b_field_Vcm = get_number_or(obj, "b_field_Vcm", p.b_field_Vcm);
      p.ea_eV = get_number_or(obj, "ea_eV", p.ea_eV);
      p.t_bd0 = get_number_or(obj, "t_bd0", p.t_bd0);
      p.a_coeff_K = get_number_or(obj, "a_coeff_K", p.a_coeff_K);
      p.b_coeff_K2 = get_number_or(obj, "b_coeff_K2", p.b_coeff_K2);
      p.weibull_shape = get_number_or(obj, "weibull_shape", p.weibull_shape);
      return p;
    }
    case Mechanism::Electromigration: {
      reject_unknown_keys(obj, "model_params", {"a_scale", "n_exponent", "ea_eV"});
      EmParams p;
      p.a_scale = get_number(obj, "a_scale");
      p.n_exponent = get_number(obj, "n_exponent");
      p.ea_eV = get_number(obj, "ea_eV");
      return p;
    }
    case Mechanism::Nbti: {
      reject_unknown_keys(obj, "model_params",
                          {"a0", "gamma_v", "beta_t", "e_nb_eV", "vth_crit_V"});
      NbtiParams p;
      p.a0 = get_number(obj, "a0");
      p.gamma_v = get_number_or(obj, "gamma_v", p.gamma_v);
      p.beta_t = get_number_or(obj, "beta_t", p.beta_t);
      p.e_nb_eV = get_number(obj, "e_nb_eV");
      p.vth_crit_V = get_number_or(obj, "vth_crit_V", p.vth_crit_V);
      return p;
    }
  }
  throw ConfigError("unknown mechanism");
}

BaseCondition parse_operating_point(const json& obj) {
  reject_unknown_keys(obj, "operating_point",
                      {"temperature_C", "temperature_K", "gate_voltage_V",
                       "drain_current_A", "substrate_current_A",
                       "current_density_A_cm2", "stress_time", "d_ox_cm",
                       "e_ox_Vcm"});
  const bool has_c = obj.contains("temperature_C");
  const bool has_k = obj.contains("temperature_K");
  if (has_c == has_k)
    throw ConfigError(
        "operating_point needs exactly one of temperature_C / temperature_K");
  BaseCondition base;
  base.op.temperature_K = has_k ? get_number(obj, "temperature_K")
                                : get_number(obj, "temperature_C") + 273.15;
  base.op.gate_voltage_V = get_number_or(obj, "gate_voltage_V", 0.0);
  base.op.drain_current_A = get_number_or(obj, "drain_current_A", 0.0);
  base.op.substrate_current_A = get_number_or(obj, "substrate_current_A", 0.0);
  base.op.current_density_A_cm2 =
      get_number_or(obj, "current_density_A_cm2", 0.0);
  base.op.stress_time = get_number_or(obj, "stress_time", 0.0);
  base.d_ox_cm = get_number_or(obj, "d_ox_cm", 0.0);
  if (obj.contains("e_ox_Vcm")) base.e_ox_Vcm = get_number(obj, "e_ox_Vcm");
  return base;
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json quantiles_json(const PopulationResult& pop) {
  json q;
  q["p01"] = pop.quantiles.at(0.01);
  q["p10"] = pop.quantiles.at(0.1);
  q["p50"] = pop.quantiles.at(0.5);
  q["p90"] = pop.quantiles.at(0.9);
  return q;
}

json population_json(const PopulationResult& pop) {
  json j;
  j["infection_fraction"] = pop.infection_fraction;
  j["infection_ci_halfwidth"] = pop.infection_ci_halfwidth;
  j["quantiles"] = quantiles_json(pop);
  return j;
}

constexpr int kHistogramBins = 50;

std::vector<std::size_t> histogram_counts(const std::vector<double>& samples,
                                          double lo, double hi) {
  std::vector<std::size_t> counts(kHistogramBins, 0);
  const double width = (hi - lo) / kHistogramBins;
  for (double x : samples) {
    int bin = width > 0.0 ? static_cast<int>((x - lo) / width) : 0;
    bin = std::clamp(bin, 0, kHistogramBins - 1);
    ++counts[static_cast<std::size_t>(bin)];
  }
  return counts;
}

}  // namespace

TrojanScenario parse_scenario_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("scenario file must be a JSON object");
  reject_unknown_keys(doc, "scenario",
                      {"label", "mechanism", "model_params", "operating_point",
                       "distributions", "shifts", "mission_lifetime_hours",
                       "n_samples", "seed"});

  TrojanScenario s;
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) throw ConfigError("'label' must be a string");
    s.label = doc["label"].get<std::string>();
  }
  if (!doc.contains("mechanism") || !doc["mechanism"].is_string())
    throw ConfigError("scenario needs a string 'mechanism'");
  s.mechanism = mechanism_from_string(doc["mechanism"].get<std::string>());
  if (!doc.contains("model_params") || !doc["model_params"].is_object())
    throw ConfigError("scenario needs an object 'model_params'");
  s.model_params = parse_model_params(s.mechanism, doc["model_params"]);
  if (!doc.contains("operating_point") || !doc["operating_point"].is_object())
    throw ConfigError("scenario needs an object 'operating_point'");
  s.base = parse_operating_point(doc["operating_point"]);

  if (doc.contains("distributions")) {
    if (!doc["distributions"].is_array())
      throw ConfigError("'distributions' must be an array");
    for (const auto& d : doc["distributions"]) {
      reject_unknown_keys(d, "distribution",
                          {"name", "mean", "sigma", "target", "floor"});
      ParameterDistribution dist;
      if (!d.contains("name") || !d["name"].is_string())
        throw ConfigError("distribution needs a string 'name'");
      dist.name = d["name"].get<std::string>();
      dist.mean = get_number(d, "mean");
      dist.sigma = get_number(d, "sigma");
      if (!d.contains("target") || !d["target"].is_string())
        throw ConfigError("distribution needs a string 'target'");
      dist.target = binding_from_string(d["target"].get<std::string>());
      if (d.contains("floor")) dist.floor = get_number(d, "floor");
      s.distributions.push_back(std::move(dist));
    }
  }
  if (doc.contains("shifts")) {
    if (!doc["shifts"].is_array()) throw ConfigError("'shifts' must be an array");
    for (const auto& sh : doc["shifts"]) {
      reject_unknown_keys(sh, "shift", {"parameter", "delta_mean", "sigma_scale"});
      TrojanShift shift;
      if (!sh.contains("parameter") || !sh["parameter"].is_string())
        throw ConfigError("shift needs a string 'parameter'");
      shift.parameter_name = sh["parameter"].get<std::string>();
      shift.delta_mean = get_number(sh, "delta_mean");
      shift.sigma_scale = get_number_or(sh, "sigma_scale", 1.0);
      s.shifts.push_back(std::move(shift));
    }
  }
  s.mission_lifetime = get_number_or(doc, "mission_lifetime_hours", 87600.0);
  if (doc.contains("n_samples")) {
    if (!doc["n_samples"].is_number_unsigned() || doc["n_samples"] == 0)
      throw ConfigError("'n_samples' must be a positive integer");
    s.n_samples = doc["n_samples"].get<std::size_t>();
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned())
      throw ConfigError("'seed' must be a nonnegative integer");
    s.seed = doc["seed"].get<std::uint64_t>();
  }
  return s;
}

TrojanScenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_json(buf.str());
}

std::string report_to_json(const TrojanScenario& s, const ScenarioReport& r) {
  json doc;
  doc["label"] = s.label;
  doc["mechanism"] = to_string(s.mechanism);
  doc["mission_lifetime_hours"] = s.mission_lifetime;
  doc["n_samples"] = s.n_samples;
  doc["seed"] = s.seed;
  doc["nominal"] = population_json(r.nominal);
  doc["infected"] = population_json(r.infected);
  doc["infection_delta"] = r.infection_delta;
  doc["mttf_ratio_median"] = r.mttf_ratio_median;
  json sens = json::array();
  for (const auto& [name, fraction] : r.sensitivity) {
    json row;
    row["parameter"] = name;
    row["infection_fraction"] = fraction;
    sens.push_back(std::move(row));
  }
  doc["sensitivity"] = std::move(sens);
  if (r.analytic_nominal && r.analytic_infected) {
    json check;
    check["nominal"] = *r.analytic_nominal;
    check["infected"] = *r.analytic_infected;
    doc["analytic_check"] = std::move(check);
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto* pop : {&r.nominal, &r.infected})
    for (double x : pop->ttf_samples) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  json hist;
  hist["min"] = lo;
  hist["max"] = hi;
  hist["bin_count"] = kHistogramBins;
  hist["nominal_counts"] = histogram_counts(r.nominal.ttf_samples, lo, hi);
  hist["infected_counts"] = histogram_counts(r.infected.ttf_samples, lo, hi);
  doc["histogram"] = std::move(hist);
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const TrojanScenario& s, const ScenarioReport& r) {
  std::string out = "device_id,ttf,failed_before_mission,population\n";
  const auto emit = [&](const PopulationResult& pop, const char* name) {
    for (std::size_t i = 0; i < pop.ttf_samples.size(); ++i) {
      out += std::to_string(i);
      out += ',';
      out += format17(pop.ttf_samples[i]);
      out += ',';
      out += pop.ttf_samples[i] < s.mission_lifetime ? '1' : '0';
      out += ',';
      out += name;
      out += '\n';
    }
  };
  emit(r.nominal, "nominal");
  emit(r.infected, "infected");
  return out;
}

}  // namespace wearsim

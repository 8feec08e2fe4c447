#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wearsim/scenario.hpp"
#include "wearsim/scenario_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Shared model/operating-point flags. `suffix` distinguishes the second
// condition of an accel query.
struct PointFlags {
  std::optional<double> temp_k, temp_c;
  std::optional<double> a, b, n, m, ea;
  std::optional<double> j, isub, idrain, eox, dox, vg, stress_time;
  std::optional<double> tau0, gamma, tbd0, a_coeff, b_coeff;
  std::optional<double> a0, gamma_v, beta, enb, vcrit;
  std::string variant = "thin";

  void add_to(CLI::App& cmd, const std::string& suffix) {
    cmd.add_option("--temp-k" + suffix, temp_k, "temperature (K)");
    cmd.add_option("--temp-c" + suffix, temp_c, "temperature (degrees C)");
    cmd.add_option("--A" + suffix, a, "prefactor (em A, ob thin A)");
    cmd.add_option("--B" + suffix, b, "hci B scale / ob field acceleration B");
    cmd.add_option("--n" + suffix, n, "em current-density exponent");
    cmd.add_option("--m" + suffix, m, "hci substrate-current ratio exponent");
    cmd.add_option("--N" + suffix, m_big, "hci substrate-current exponent N");
    cmd.add_option("--ea" + suffix, ea, "activation energy (eV)");
    cmd.add_option("--j" + suffix, j, "current density (A/cm^2)");
    cmd.add_option("--isub" + suffix, isub, "substrate current (A)");
    cmd.add_option("--idrain" + suffix, idrain, "drain current (A)");
    cmd.add_option("--eox" + suffix, eox, "oxide field (V/cm)");
    cmd.add_option("--dox" + suffix, dox, "oxide thickness (cm)");
    cmd.add_option("--vg" + suffix, vg, "gate voltage (V)");
    cmd.add_option("--time" + suffix, stress_time, "stress time");
    cmd.add_option("--tau0" + suffix, tau0, "ob E/1/E model prefactor");
    cmd.add_option("--gamma" + suffix, gamma, "ob field coefficient");
    cmd.add_option("--tbd0" + suffix, tbd0, "ob ultra-thin prefactor");
    cmd.add_option("--a-coeff" + suffix, a_coeff, "ob ultra-thin a(V) (K)");
    cmd.add_option("--b-coeff" + suffix, b_coeff, "ob ultra-thin b(V) (K^2)");
    cmd.add_option("--a0" + suffix, a0, "nbti amplitude (V)");
    cmd.add_option("--gamma-v" + suffix, gamma_v, "nbti voltage exponent");
    cmd.add_option("--beta" + suffix, beta, "nbti time exponent");
    cmd.add_option("--enb" + suffix, enb, "nbti activation energy (eV)");
    cmd.add_option("--vcrit" + suffix, vcrit, "nbti failure criterion (V)");
    if (suffix.empty())
      cmd.add_option("--variant", variant, "ob variant: e|inv_e|thin|ultrathin");
  }

  std::optional<double> m_big;

  double require(const std::optional<double>& v, const char* flag) const {
    if (!v) throw UsageError(std::string("missing required flag ") + flag);
    return *v;
  }

  double temperature(const PointFlags* fallback) const {
    if (temp_k) return *temp_k;
    if (temp_c) return *temp_c + 273.15;
    if (fallback) return fallback->temperature(nullptr);
    throw UsageError("missing required flag --temp-k or --temp-c");
  }

  // Builds (params, base) for the mechanism; unspecified values fall back
  // to the other condition's flags (for accel) before becoming required.
  std::pair<wearsim::MechanismParams, wearsim::BaseCondition> resolve(
      wearsim::Mechanism mech, const PointFlags* fb) const {
    using namespace wearsim;
    const auto pick = [&](const std::optional<double>& mine,
                          std::optional<double> PointFlags::*member)
        -> std::optional<double> {
      if (mine) return mine;
      if (fb && fb->*member) return fb->*member;
      return std::nullopt;
    };
    const auto need = [&](std::optional<double> PointFlags::*member,
                          const char* flag) {
      const auto v = pick(this->*member, member);
      if (!v) throw UsageError(std::string("missing required flag ") + flag);
      return *v;
    };
    const auto opt = [&](std::optional<double> PointFlags::*member,
                         double fallback_value) {
      const auto v = pick(this->*member, member);
      return v ? *v : fallback_value;
    };

    BaseCondition base;
    base.op.temperature_K = temperature(fb);
    switch (mech) {
      case Mechanism::Hci: {
        HciParams p;
        p.b_scale = need(&PointFlags::b, "--B");
        p.n_exponent = need(&PointFlags::m_big, "--N");
        p.ea_eV = need(&PointFlags::ea, "--ea");
        p.m_exponent = opt(&PointFlags::m, p.m_exponent);
        base.op.substrate_current_A = need(&PointFlags::isub, "--isub");
        base.op.drain_current_A = opt(&PointFlags::idrain, 0.0);
        return {p, base};
      }
      case Mechanism::OxideBreakdown: {
        ObParams p;
        // The second accel condition has no --variant flag; it shares the
        // first condition's variant.
        const std::string& var = fb ? fb->variant : variant;
        if (var == "e") p.variant = ObVariant::E_MODEL;
        else if (var == "inv_e") p.variant = ObVariant::INV_E_MODEL;
        else if (var == "thin") p.variant = ObVariant::THIN_ARRHENIUS;
        else if (var == "ultrathin") p.variant = ObVariant::ULTRA_THIN;
        else throw UsageError("unknown --variant '" + var + "'");
        switch (p.variant) {
          case ObVariant::E_MODEL:
          case ObVariant::INV_E_MODEL:
            p.tau0 = need(&PointFlags::tau0, "--tau0");
            p.gamma = need(&PointFlags::gamma, "--gamma");
            break;
          case ObVariant::THIN_ARRHENIUS:
            p.a_scale = need(&PointFlags::a, "--A");
            p.b_field_Vcm = need(&PointFlags::b, "--B");
            p.ea_eV = need(&PointFlags::ea, "--ea");
            break;
          case ObVariant::ULTRA_THIN:
            p.t_bd0 = need(&PointFlags::tbd0, "--tbd0");
            p.a_coeff_K = opt(&PointFlags::a_coeff, 0.0);
            p.b_coeff_K2 = opt(&PointFlags::b_coeff, 0.0);
            break;
        }
        if (p.variant != ObVariant::ULTRA_THIN) {
          const auto field = pick(eox, &PointFlags::eox);
          if (field) {
            base.e_ox_Vcm = *field;
          } else {
            base.d_ox_cm = need(&PointFlags::dox, "--eox or --dox");
            base.op.gate_voltage_V = need(&PointFlags::vg, "--vg");
          }
        }
        return {p, base};
      }
      case Mechanism::Electromigration: {
        EmParams p;
        p.a_scale = need(&PointFlags::a, "--A");
        p.n_exponent = need(&PointFlags::n, "--n");
        p.ea_eV = need(&PointFlags::ea, "--ea");
        base.op.current_density_A_cm2 = need(&PointFlags::j, "--j");
        return {p, base};
      }
      case Mechanism::Nbti: {
        NbtiParams p;
        p.a0 = need(&PointFlags::a0, "--a0");
        p.e_nb_eV = need(&PointFlags::enb, "--enb");
        p.gamma_v = opt(&PointFlags::gamma_v, p.gamma_v);
        p.beta_t = opt(&PointFlags::beta, p.beta_t);
        p.vth_crit_V = opt(&PointFlags::vcrit, p.vth_crit_V);
        base.op.gate_voltage_V = need(&PointFlags::vg, "--vg");
        return {p, base};
      }
    }
    throw UsageError("unknown mechanism");
  }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw wearsim::ConfigError("cannot write '" + path + "'");
  out << content;
}

int run_mttf(const std::string& mechanism, const PointFlags& flags) {
  const auto mech = wearsim::mechanism_from_string(mechanism);
  const auto [params, base] = flags.resolve(mech, nullptr);
  const double ttf = wearsim::mechanism_ttf(mech, params, base);
  const bool is_tbd =
      mech == wearsim::Mechanism::OxideBreakdown &&
      std::get<wearsim::ObParams>(params).variant != wearsim::ObVariant::THIN_ARRHENIUS &&
      std::get<wearsim::ObParams>(params).variant != wearsim::ObVariant::ULTRA_THIN;
  std::cout << (is_tbd ? "t_BD = " : "MTTF = ") << format17(ttf) << "\n";
  return kExitOk;
}

int run_accel(const std::string& mechanism, const PointFlags& stress,
              const PointFlags& use) {
  const auto mech = wearsim::mechanism_from_string(mechanism);
  const auto [params_stress, base_stress] = stress.resolve(mech, nullptr);
  const auto [params_use, base_use] = use.resolve(mech, &stress);
  const double af = wearsim::acceleration_factor(mech, params_stress,
                                                 base_stress, params_use,
                                                 base_use);
  std::cout << "AF = " << format17(af) << "\n";
  return kExitOk;
}

std::vector<double> read_csv_column(const std::string& path,
                                    const std::string& column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw wearsim::ConfigError("cannot open '" + path + "'");
  std::vector<double> values;
  std::string line;
  std::size_t col_index = 0;
  bool col_resolved = false;
  bool first_line = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (first_line) {
      first_line = false;
      // Header row if the requested column matches a cell by name, or if
      // any cell is non-numeric.
      bool is_header = false;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == column) {
          col_index = i;
          col_resolved = true;
          is_header = true;
        }
      }
      if (!is_header) {
        try {
          std::size_t pos = 0;
          (void)std::stod(cells.at(0), &pos);
          is_header = pos != cells.at(0).size();
        } catch (const std::exception&) {
          is_header = true;
        }
      }
      if (!col_resolved) {
        try {
          col_index = static_cast<std::size_t>(std::stoul(column));
          col_resolved = true;
        } catch (const std::exception&) {
          if (is_header)
            throw wearsim::ConfigError("column '" + column + "' not found in '" +
                                       path + "'");
          col_index = 0;
          col_resolved = true;
        }
      }
      if (is_header) continue;
    }
    if (col_index >= cells.size())
      throw wearsim::ConfigError("row with too few columns in '" + path + "'");
    try {
      std::size_t pos = 0;
      const double v = std::stod(cells[col_index], &pos);
      if (pos != cells[col_index].size())
        throw wearsim::ConfigError("malformed number '" + cells[col_index] + "'");
      values.push_back(v);
    } catch (const wearsim::ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw wearsim::ConfigError("malformed number '" + cells[col_index] +
                                 "' in '" + path + "'");
    }
  }
  return values;
}

int run_fit(const std::string& input, const std::string& column) {
  const auto values = read_csv_column(input, column);
  for (double v : values)
    if (!(v > 0.0))
      throw wearsim::ConfigError("TTF data must be strictly positive");
  const auto fit = wearsim::weibull_mle_fit(values);
  nlohmann::ordered_json out;
  out["beta"] = fit.shape_beta;
  out["eta"] = fit.scale_eta;
  out["log_likelihood"] = wearsim::weibull_log_likelihood(fit, values);
  out["n"] = values.size();
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

wearsim::TrojanScenario load_scenario(const std::string& config,
                                      std::optional<std::size_t> samples,
                                      std::optional<std::uint64_t> seed) {
  auto scenario = wearsim::load_scenario_file(config);
  if (samples) scenario.n_samples = *samples;
  if (seed) scenario.seed = *seed;
  const auto diags = wearsim::validate_scenario(scenario);
  if (wearsim::has_errors(diags)) {
    std::ostringstream msg;
    msg << "scenario '" << config << "' failed validation:";
    for (const auto& d : diags)
      msg << "\n  "
          << (d.severity == wearsim::Severity::Error ? "error: " : "warning: ")
          << d.message;
    throw wearsim::ConfigError(msg.str());
  }
  for (const auto& d : diags)
    if (d.severity == wearsim::Severity::Warning)
      std::cerr << "warning: " << d.message << "\n";
  return scenario;
}

int run_scenario_cmd(const std::string& config, const std::string& out,
                     std::optional<std::size_t> samples,
                     std::optional<std::uint64_t> seed) {
  const auto scenario = load_scenario(config, samples, seed);
  const auto report = wearsim::run_scenario(scenario);
  write_file(out + ".report.json", wearsim::report_to_json(scenario, report));
  write_file(out + ".samples.csv", wearsim::report_to_csv(scenario, report));
  std::cout << "nominal infection = " << format17(report.nominal.infection_fraction)
            << "\ninfected infection = "
            << format17(report.infected.infection_fraction)
            << "\ninfection delta = " << format17(report.infection_delta) << "\n";
  return kExitOk;
}

int run_sample_cmd(const std::string& config, const std::string& out,
                   bool shifted, std::optional<std::size_t> samples,
                   std::optional<std::uint64_t> seed) {
  const auto scenario = load_scenario(config, samples, seed);
  wearsim::PopulationConfig cfg;
  cfg.mechanism = scenario.mechanism;
  cfg.params = scenario.model_params;
  cfg.base = scenario.base;
  cfg.distributions = scenario.distributions;
  cfg.shifts = scenario.shifts;
  cfg.mission_lifetime = scenario.mission_lifetime;
  cfg.n_samples = scenario.n_samples;
  cfg.seed = scenario.seed;

  std::string csv = "device_id";
  for (const auto& d : cfg.distributions) csv += "," + d.name;
  csv += ",ttf\n";
  for (std::size_t i = 0; i < cfg.n_samples; ++i) {
    const auto draw = wearsim::sample_device(cfg, shifted, i);
    csv += std::to_string(i);
    for (double v : draw.parameter_values) csv += "," + format17(v);
    csv += "," + format17(draw.ttf) + "\n";
  }
  write_file(out, csv);
  std::cout << "wrote " << cfg.n_samples << " draws to " << out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CMOS wearout lifetime models and reliability-Trojan "
               "population simulation"};
  app.require_subcommand(1);

  std::string mechanism;
  PointFlags point, point2;
  auto* mttf = app.add_subcommand("mttf", "evaluate one lifetime model");
  mttf->add_option("--mechanism", mechanism, "hci|ob|em|nbti")->required();
  point.add_to(*mttf, "");

  std::string accel_mechanism;
  PointFlags accel_stress, accel_use;
  auto* accel = app.add_subcommand(
      "accel", "acceleration factor MTTF(use)/MTTF(stress)");
  accel->add_option("--mechanism", accel_mechanism, "hci|ob|em|nbti")->required();
  accel_stress.add_to(*accel, "");
  accel_use.add_to(*accel, "2");

  std::string config_path, out_path;
  std::optional<std::size_t> samples_override;
  std::optional<std::uint64_t> seed_override;
  auto* scenario = app.add_subcommand(
      "scenario", "run a Trojan scenario from a JSON config");
  scenario->add_option("--config", config_path, "scenario JSON file")->required();
  scenario->add_option("--out", out_path,
                       "output prefix (.report.json / .samples.csv)")->required();
  scenario->add_option("--samples", samples_override, "override n_samples");
  scenario->add_option("--seed", seed_override, "override seed");

  std::string fit_input, fit_column = "ttf";
  auto* fit = app.add_subcommand("fit", "Weibull MLE fit of TTF data");
  fit->add_option("--input", fit_input, "CSV file of TTF samples")->required();
  fit->add_option("--column", fit_column, "column name or index (default ttf)");

  std::string sample_config, sample_out;
  bool sample_shifted = false;
  std::optional<std::size_t> sample_samples;
  std::optional<std::uint64_t> sample_seed;
  auto* sample = app.add_subcommand(
      "sample", "emit raw parameter/TTF draws to CSV");
  sample->add_option("--config", sample_config, "scenario JSON file")->required();
  sample->add_option("--out", sample_out, "output CSV path")->required();
  sample->add_flag("--shifted", sample_shifted, "apply the Trojan shifts");
  sample->add_option("--samples", sample_samples, "override n_samples");
  sample->add_option("--seed", sample_seed, "override seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (mttf->parsed()) return run_mttf(mechanism, point);
    if (accel->parsed()) return run_accel(accel_mechanism, accel_stress, accel_use);
    if (scenario->parsed())
      return run_scenario_cmd(config_path, out_path, samples_override,
                              seed_override);
    if (fit->parsed()) return run_fit(fit_input, fit_column);
    if (sample->parsed())
      return run_sample_cmd(sample_config, sample_out, sample_shifted,
                            sample_samples, sample_seed);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const wearsim::ConfigError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitData;
  } catch (const wearsim::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const wearsim::BindingError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const wearsim::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}

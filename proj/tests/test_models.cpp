#include "doctest.h"

#include <cmath>
#include <random>

#include "wearsim/mechanism.hpp"
#include "wearsim/models.hpp"

using namespace wearsim;

namespace {

// Independent high-precision oracles, written straight from the equations
// in long double.
constexpr long double kB = 8.617333262e-5L;

long double oracle_hci_rate(long double B, long double id, long double is,
                            long double m) {
  return B * id * powl(is / id, m);
}

long double oracle_hci_mttf(long double B, long double is, long double N,
                            long double ea, long double T) {
  return B * powl(is, -N) * expl(ea / (kB * T));
}

long double oracle_em(long double A, long double j, long double n,
                      long double ea, long double T) {
  return A * powl(j, -n) * expl(ea / (kB * T));
}

long double oracle_ob_thin(long double A, long double B, long double E,
                           long double ea, long double T) {
  return A * expl(B / E) * expl(ea / (kB * T));
}

long double oracle_nbti(long double a0, long double vg, long double gv,
                        long double t, long double beta, long double enb,
                        long double T) {
  return a0 * powl(fabsl(vg), gv) * powl(t, beta) * expl(-enb / (kB * T));
}

OperatingPoint at_temp(double T) {
  OperatingPoint op;
  op.temperature_K = T;
  return op;
}

}  // namespace

TEST_CASE("hci_failure_rate matches Eq. form") {
  HciParams p;
  OperatingPoint op;
  op.drain_current_A = 1.0;
  op.substrate_current_A = 1.0;
  p.b_scale = 1.0;
  p.m_exponent = 3.0;
  CHECK(hci_failure_rate(op, p) == doctest::Approx(1.0).epsilon(1e-14));

  op.substrate_current_A = 0.0;
  p.m_exponent = 2.0;
  CHECK(hci_failure_rate(op, p) == 0.0);

  p.b_scale = 2.0;
  op.drain_current_A = 4.0;
  op.substrate_current_A = 2.0;
  CHECK(hci_failure_rate(op, p) ==
        doctest::Approx(static_cast<double>(oracle_hci_rate(2, 4, 2, 2)))
            .epsilon(1e-13));
  CHECK(hci_failure_rate(op, p) == doctest::Approx(2.0).epsilon(1e-13));

  op.drain_current_A = 0.0;
  CHECK_THROWS_AS(hci_failure_rate(op, p), DomainError);
}

TEST_CASE("hci_mttf power-law and Arrhenius factor") {
  HciParams p;
  OperatingPoint op = at_temp(300.0);
  op.substrate_current_A = 1.0;
  p.b_scale = 1.0;
  p.n_exponent = 3.0;
  p.ea_eV = 0.0;
  CHECK(hci_mttf(op, p) == doctest::Approx(1.0).epsilon(1e-14));

  p.b_scale = 2.0;
  p.n_exponent = 2.0;
  op.substrate_current_A = 10.0;
  CHECK(hci_mttf(op, p) == doctest::Approx(0.02).epsilon(1e-13));

  p.b_scale = 1.0;
  op.substrate_current_A = 1.0;
  p.ea_eV = -0.15;
  const double expected =
      static_cast<double>(oracle_hci_mttf(1, 1, 2, -0.15L, 300));
  CHECK(hci_mttf(op, p) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(expected == doctest::Approx(3.017e-3).epsilon(1e-3));

  op.substrate_current_A = 0.0;
  CHECK_THROWS_AS(hci_mttf(op, p), DomainError);
  op.substrate_current_A = 1.0;
  op.temperature_K = 0.0;
  CHECK_THROWS_AS(hci_mttf(op, p), DomainError);
}

TEST_CASE("hci_vth_shift") {
  HciParams p;
  OperatingPoint op;
  p.n_prime = 0.5;
  op.stress_time = 0.0;
  CHECK(hci_vth_shift(op, p) == 0.0);

  p.vth_prefactor = 1.0;
  p.q_inversion = 4.0;
  p.e_ox_Vcm = 0.0;
  p.phi_it_eV = 0.0;
  op.stress_time = 1.0;
  CHECK(hci_vth_shift(op, p) == doctest::Approx(2.0).epsilon(1e-14));

  p.q_inversion = 1.0;
  p.e_ox_Vcm = 1.0;
  p.e0_Vcm = 1.0;
  p.phi_it_eV = 1.0;
  p.lambda_mfp_cm = 1.0;
  p.e_m_Vcm = 1.0;
  p.n_prime = 0.25;
  op.stress_time = 16.0;
  CHECK(hci_vth_shift(op, p) == doctest::Approx(2.0).epsilon(1e-13));

  op.stress_time = -1.0;
  CHECK_THROWS_AS(hci_vth_shift(op, p), DomainError);
}

TEST_CASE("oxide_field") {
  CHECK(oxide_field(1.0, 1.0) == 1.0);
  CHECK(oxide_field(0.0, 5e-7) == 0.0);
  CHECK(oxide_field(3.3, 5e-7) == doctest::Approx(6.6e6).epsilon(1e-13));
  CHECK_THROWS_AS(oxide_field(1.0, 0.0), DomainError);
}

TEST_CASE("time_to_breakdown E and 1/E variants") {
  ObParams p;
  p.variant = ObVariant::E_MODEL;
  p.tau0 = 1.0;
  p.gamma = 1.0;
  CHECK(time_to_breakdown(0.0, p) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(time_to_breakdown(1.0, p) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-13));

  p.variant = ObVariant::INV_E_MODEL;
  p.gamma = 2.0;
  CHECK(time_to_breakdown(1.0, p) ==
        doctest::Approx(std::exp(2.0)).epsilon(1e-13));
  CHECK_THROWS_AS(time_to_breakdown(0.0, p), DomainError);

  p.variant = ObVariant::THIN_ARRHENIUS;
  CHECK_THROWS_AS(time_to_breakdown(1.0, p), BindingError);
}

TEST_CASE("mttf_ob_thin") {
  ObParams p;
  p.variant = ObVariant::THIN_ARRHENIUS;
  p.a_scale = 1.0;
  p.b_field_Vcm = 0.0;
  p.ea_eV = 0.0;
  CHECK(mttf_ob_thin(1.0, 300.0, p) == doctest::Approx(1.0).epsilon(1e-14));

  p.b_field_Vcm = 1.0;
  CHECK(mttf_ob_thin(1.0, 300.0, p) ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-13));

  p.b_field_Vcm = 0.0;
  p.ea_eV = 0.3;
  const double expected =
      static_cast<double>(oracle_ob_thin(1, 0, 1, 0.3L, 350));
  CHECK(mttf_ob_thin(1.0, 350.0, p) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(expected == doctest::Approx(2.09e4).epsilon(2e-3));

  CHECK_THROWS_AS(mttf_ob_thin(0.0, 300.0, p), DomainError);
  CHECK_THROWS_AS(mttf_ob_thin(1.0, 0.0, p), DomainError);
}

TEST_CASE("mttf_ob_ultrathin") {
  ObParams p;
  p.variant = ObVariant::ULTRA_THIN;
  p.t_bd0 = 1.0;
  p.a_coeff_K = 0.0;
  p.b_coeff_K2 = 0.0;
  CHECK(mttf_ob_ultrathin(300.0, p) == doctest::Approx(1.0).epsilon(1e-14));

  p.a_coeff_K = 300.0;
  CHECK(mttf_ob_ultrathin(300.0, p) ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-13));

  p.t_bd0 = 2.0;
  p.a_coeff_K = 0.0;
  p.b_coeff_K2 = 9e4;
  CHECK(mttf_ob_ultrathin(300.0, p) ==
        doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-13));

  CHECK_THROWS_AS(mttf_ob_ultrathin(0.0, p), DomainError);
}

TEST_CASE("mttf_em Black form") {
  EmParams p{1.0, 1.5, 0.0};
  OperatingPoint op = at_temp(300.0);
  op.current_density_A_cm2 = 1.0;
  CHECK(mttf_em(op, p) == doctest::Approx(1.0).epsilon(1e-14));

  p.n_exponent = 2.0;
  op.current_density_A_cm2 = 2.0;
  CHECK(mttf_em(op, p) == doctest::Approx(0.25).epsilon(1e-13));

  p = {1.0, 1.0, 0.7};
  op = at_temp(373.15);
  op.current_density_A_cm2 = 1.0;
  const double expected = static_cast<double>(oracle_em(1, 1, 1, 0.7L, 373.15L));
  CHECK(mttf_em(op, p) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(expected == doctest::Approx(2.85e9).epsilon(5e-3));

  op.current_density_A_cm2 = 0.0;
  CHECK_THROWS_AS(mttf_em(op, p), DomainError);
}

TEST_CASE("nbti_vth_shift") {
  NbtiParams p;
  OperatingPoint op = at_temp(300.0);
  op.stress_time = 0.0;
  CHECK(nbti_vth_shift(op, p) == 0.0);

  p = {0.1, 1.0, 0.25, 0.0, 0.05};
  op.gate_voltage_V = 1.0;
  op.stress_time = 16.0;
  CHECK(nbti_vth_shift(op, p) == doctest::Approx(0.2).epsilon(1e-13));

  p = {0.1, 0.0, 0.25, 0.1, 0.05};
  op = at_temp(423.15);
  op.gate_voltage_V = 1.0;
  op.stress_time = 1.0;
  const double expected =
      static_cast<double>(oracle_nbti(0.1L, 1, 0, 1, 0.25L, 0.1L, 423.15L));
  CHECK(nbti_vth_shift(op, p) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(expected == doctest::Approx(6.44e-3).epsilon(2e-3));
}

TEST_CASE("nbti_lifetime inversion") {
  NbtiParams p{0.1, 0.0, 0.25, 0.0, 0.1};
  OperatingPoint op = at_temp(300.0);
  op.gate_voltage_V = 1.0;
  CHECK(nbti_lifetime(op, p) == doctest::Approx(1.0).epsilon(1e-13));

  p.vth_crit_V = 0.2;
  CHECK(nbti_lifetime(op, p) == doctest::Approx(16.0).epsilon(1e-13));

  // Criterion unreachable at zero gate bias with a voltage dependence.
  p.gamma_v = 1.0;
  op.gate_voltage_V = 0.0;
  CHECK_THROWS_AS(nbti_lifetime(op, p), DomainError);
}

TEST_CASE("nbti round-trip identity over randomized parameters") {
  std::mt19937 gen(42);
  std::uniform_real_distribution<double> uni(0.1, 3.0);
  for (int i = 0; i < 100; ++i) {
    NbtiParams p;
    p.a0 = uni(gen);
    p.gamma_v = uni(gen);
    p.beta_t = 0.1 + 0.3 * uni(gen);
    p.e_nb_eV = 0.05 * uni(gen);
    p.vth_crit_V = 0.02 * uni(gen);
    OperatingPoint op = at_temp(250.0 + 100.0 * uni(gen));
    op.gate_voltage_V = -uni(gen);
    const double t_star = nbti_lifetime(op, p);
    op.stress_time = t_star;
    const double shift = nbti_vth_shift(op, p);
    CHECK(std::abs(shift - p.vth_crit_V) / p.vth_crit_V < 1e-9);
  }
}

TEST_CASE("acceleration factor identities") {
  EmParams p{1.0, 2.0, 0.7};
  BaseCondition c1;
  c1.op = at_temp(373.15);
  c1.op.current_density_A_cm2 = 1.0;
  CHECK(acceleration_factor(Mechanism::Electromigration, p, c1, c1) ==
        doctest::Approx(1.0).epsilon(1e-14));

  // Doubling j with n = 2 quarters the lifetime.
  BaseCondition c2 = c1;
  c2.op.current_density_A_cm2 = 2.0;
  CHECK(acceleration_factor(Mechanism::Electromigration, p, c2, c1) ==
        doctest::Approx(4.0).epsilon(1e-13));

  // Pure Al (1.4 eV) vs Cu-doped (0.7 eV) at fixed stress.
  EmParams al{1.0, 2.0, 1.4};
  EmParams cu{1.0, 2.0, 0.7};
  const double af =
      acceleration_factor(Mechanism::Electromigration, cu, c1, al, c1);
  const double expected = static_cast<double>(
      expl(0.7L / (kB * 373.15L)));
  CHECK(af == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("acceleration factor composes multiplicatively") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> uni(0.5, 2.0);
  for (int i = 0; i < 50; ++i) {
    EmParams p{uni(gen), 1.0 + 0.8 * uni(gen) / 2.0, 0.3 + 0.5 * uni(gen)};
    BaseCondition c1, c2, c3;
    for (auto* c : {&c1, &c2, &c3}) {
      c->op.temperature_K = 250.0 + 150.0 * uni(gen) / 2.0;
      c->op.current_density_A_cm2 = 1e4 * uni(gen);
    }
    const auto m = Mechanism::Electromigration;
    const double a13 = acceleration_factor(m, p, c1, c3);
    const double a12 = acceleration_factor(m, p, c1, c2);
    const double a23 = acceleration_factor(m, p, c2, c3);
    CHECK(std::abs(a13 - a12 * a23) / a13 < 1e-12);
  }
}

TEST_CASE("monotonicity and positivity properties") {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> uni(0.5, 2.0);
  for (int i = 0; i < 50; ++i) {
    EmParams em{uni(gen), 1.5, 0.7};
    OperatingPoint op = at_temp(300.0 + 50.0 * uni(gen));
    op.current_density_A_cm2 = 1e4 * uni(gen);
    const double base = mttf_em(op, em);
    CHECK(base > 0.0);
    CHECK(std::isfinite(base));

    OperatingPoint hotter = op;
    hotter.temperature_K += 10.0;
    CHECK(mttf_em(hotter, em) < base);

    OperatingPoint denser = op;
    denser.current_density_A_cm2 *= 1.5;
    CHECK(mttf_em(denser, em) < base);

    // Exact prefactor scaling.
    EmParams scaled = em;
    scaled.a_scale *= 3.0;
    CHECK(mttf_em(op, scaled) == doctest::Approx(3.0 * base).epsilon(1e-14));

    ObParams ob;
    ob.variant = ObVariant::THIN_ARRHENIUS;
    ob.a_scale = uni(gen);
    ob.b_field_Vcm = 1e6 * uni(gen);
    ob.ea_eV = 0.3;
    const double e1 = 1e6 * uni(gen);
    CHECK(mttf_ob_thin(e1 * 1.2, op.temperature_K, ob) <
          mttf_ob_thin(e1, op.temperature_K, ob));
    CHECK(mttf_ob_thin(e1, op.temperature_K + 15.0, ob) <
          mttf_ob_thin(e1, op.temperature_K, ob));

    ObParams tb;
    tb.gamma = 1e-6 * uni(gen);  // keep exp(-gamma E) well above underflow
    tb.tau0 = uni(gen);
    tb.variant = ObVariant::E_MODEL;
    CHECK(time_to_breakdown(e1 * 1.1, tb) < time_to_breakdown(e1, tb));
    tb.variant = ObVariant::INV_E_MODEL;
    CHECK(time_to_breakdown(e1 * 1.1, tb) < time_to_breakdown(e1, tb));

    HciParams hci;
    hci.b_scale = uni(gen);
    hci.n_exponent = 3.0;
    hci.ea_eV = -0.15;
    OperatingPoint h = at_temp(330.0);
    h.substrate_current_A = 1e-4 * uni(gen);
    OperatingPoint h2 = h;
    h2.substrate_current_A *= 1.3;
    CHECK(hci_mttf(h2, hci) < hci_mttf(h, hci));

    NbtiParams nb{0.05 * uni(gen), 1.0, 0.25, 0.1, 0.05};
    OperatingPoint s = at_temp(400.0);
    s.gate_voltage_V = -1.2;
    s.stress_time = 10.0 * uni(gen);
    OperatingPoint s2 = s;
    s2.stress_time *= 2.0;
    CHECK(nbti_vth_shift(s2, nb) >= nbti_vth_shift(s, nb));
  }
}

TEST_CASE("Arrhenius slope of log(MTTF) vs 1/T is Ea/k") {
  const double ea = 0.82;
  EmParams p{2.5, 1.5, ea};
  OperatingPoint op;
  op.current_density_A_cm2 = 2e5;
  const double temps[3] = {320.0, 360.0, 410.0};
  double x[3], y[3];
  for (int i = 0; i < 3; ++i) {
    op.temperature_K = temps[i];
    x[i] = 1.0 / temps[i];
    y[i] = std::log(mttf_em(op, p));
  }
  // Least-squares slope over the three points.
  double mx = (x[0] + x[1] + x[2]) / 3.0, my = (y[0] + y[1] + y[2]) / 3.0;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 3; ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = num / den;
  CHECK(std::abs(slope - ea / k_boltzmann_eV_per_K) /
            (ea / k_boltzmann_eV_per_K) <
        1e-9);
}

namespace {

Waveform ramp_waveform(std::size_t steps, double exponent) {
  // I_sub(t) = t^exponent on [0, 1] with I_drain = 1.
  Waveform w;
  w.period = 1.0;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(steps);
    WaveformSample s;
    s.time = t;
    s.op.drain_current_A = 1.0;
    s.op.substrate_current_A = std::pow(t, exponent);
    w.samples.push_back(s);
  }
  return w;
}

}  // namespace

TEST_CASE("duty_cycle_rate") {
  HciParams p;
  p.b_scale = 1.0;
  p.m_exponent = 1.0;

  // Constant waveform returns the static rate exactly.
  Waveform w;
  w.period = 2.0;
  for (double t : {0.0, 1.0, 2.0}) {
    WaveformSample s;
    s.time = t;
    s.op.drain_current_A = 1.0;
    s.op.substrate_current_A = 0.75;
    w.samples.push_back(s);
  }
  CHECK(duty_cycle_rate(w, p) ==
        doctest::Approx(hci_failure_rate(w.samples[0].op, p)).epsilon(1e-14));

  // Square wave between rates 2 and 4 averages to 3.
  Waveform sq;
  sq.period = 1.0;
  const double lam[2] = {2.0, 4.0};
  for (int half = 0; half < 2; ++half) {
    for (int i = 0; i < 500; ++i) {
      WaveformSample s;
      s.time = 0.5 * half + 0.5 * i / 500.0;
      s.op.drain_current_A = 1.0;
      s.op.substrate_current_A = lam[half];
      sq.samples.push_back(s);
    }
  }
  CHECK(duty_cycle_rate(sq, p) == doctest::Approx(3.0).epsilon(1e-3));

  // Linear ramp integrates exactly under the trapezoidal rule.
  CHECK(std::abs(duty_cycle_rate(ramp_waveform(1000, 1.0), p) - 0.5) < 1e-6);

  Waveform bad;
  bad.period = 1.0;
  CHECK_THROWS_AS(duty_cycle_rate(bad, p), ConfigError);
}

TEST_CASE("duty_cycle_rate converges at second order") {
  HciParams p;
  p.b_scale = 1.0;
  p.m_exponent = 1.0;
  const double exact = 1.0 / 3.0;  // integral of t^2 over [0, 1]
  double prev_err = 0.0;
  for (int k = 0; k < 4; ++k) {
    const std::size_t steps = 16u << k;
    const double err =
        std::abs(duty_cycle_rate(ramp_waveform(steps, 2.0), p) - exact);
    if (k > 0) CHECK(prev_err / err >= 3.9);
    prev_err = err;
  }
}

#pragma once

namespace wearsim {

// Universal constants. Fixed, never configurable.
inline constexpr double k_boltzmann_eV_per_K = 8.617333262e-5;
inline constexpr double q_electron_C = 1.602176634e-19;

}  // namespace wearsim

// constants.hpp — CODATA/SI constants used by the trap and noise modules
#pragma once

namespace bjj::constants {

inline constexpr double hbar    = 1.054571817e-34;  // J s
inline constexpr double h_planck= 6.62607015e-34;   // J s
inline constexpr double kB      = 1.380649e-23;     // J/K
inline constexpr double mu0     = 1.25663706212e-6; // N/A^2
inline constexpr double muB     = 9.2740100783e-24; // J/T
inline constexpr double c_light = 2.99792458e8;     // m/s
inline constexpr double amu     = 1.66053906660e-27;// kg
inline constexpr double a0_bohr = 5.29177210903e-11;// m

inline constexpr double mass_rb87 = 86.909180527 * amu; // kg
inline constexpr double a_scatter_rb87 = 98.98 * a0_bohr; // m, F=2 triplet

} // namespace bjj::constants

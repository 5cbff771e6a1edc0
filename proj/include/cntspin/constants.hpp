#pragma once

// CODATA 2018 exact / recommended values, SI units.
namespace cntspin::constants {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double planck = 6.62607015e-34;            // J s
inline constexpr double hbar = 1.054571817e-34;             // J s
inline constexpr double planck_eV = 4.135667696e-15;        // eV s
inline constexpr double boltzmann = 1.380649e-23;           // J / K
inline constexpr double elementary_charge = 1.602176634e-19; // C
inline constexpr double bohr_magneton = 9.2740100783e-24;   // J / T

// Literal first clamped-clamped root as quoted for the fundamental flexural mode.
inline constexpr double first_mode_root = 4.730;

}  // namespace cntspin::constants

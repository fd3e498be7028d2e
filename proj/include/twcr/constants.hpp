#pragma once

// Physical constants (CODATA 2018). Energies in eV, lengths in metres,
// times in seconds.
namespace twcr::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double c = 299792458.0;              // m/s
inline constexpr double hbar_eVs = 6.582119569e-16;   // eV s
inline constexpr double hbar_c_eVm = 1.973269804e-7;  // eV m
inline constexpr double electron_mc2_eV = 510998.95;  // eV
inline constexpr double alpha_fs = 7.2973525693e-3;   // fine-structure constant
inline constexpr double angstrom = 1e-10;             // m

}  // namespace twcr::constants

#pragma once

namespace pli {

inline constexpr double kGravityMs2 = 9.81;

/// Peak bending stress (MPa) of a point load on a cantilevered cylindrical
/// branch: sigma = M r / I with M = F L and I = pi r^4 / 4, so 4 F L / (pi r^3).
double bending_stress_mpa(double mass_kg, double lever_m, double radius_m);

/// True when the stress clears the modulus of rupture with the given safety
/// factor. 27 MPa is the weakest bending MoR across surveyed species.
bool stress_check(double sigma_mpa, double mor_mpa = 27.0, double safety_factor = 2.0);

}  // namespace pli

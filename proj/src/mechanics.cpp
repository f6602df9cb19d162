#include "pli/mechanics.hpp"

#include "pli/error.hpp"

#include <numbers>

namespace pli {

double bending_stress_mpa(double mass_kg, double lever_m, double radius_m) {
  if (!(radius_m > 0.0)) fail("branch radius must be positive");
  if (lever_m < 0.0) fail("lever arm must be non-negative");
  if (mass_kg < 0.0) fail("mass must be non-negative");
  const double force_n = mass_kg * kGravityMs2;
  const double sigma_pa = 4.0 * force_n * lever_m / (std::numbers::pi * radius_m * radius_m * radius_m);
  return sigma_pa / 1e6;
}

bool stress_check(double sigma_mpa, double mor_mpa, double safety_factor) {
  if (sigma_mpa < 0.0 || mor_mpa < 0.0 || safety_factor <= 0.0) fail("invalid stress inputs");
  return sigma_mpa < mor_mpa / safety_factor;
}

}  // namespace pli

#include "ionchain/units.hpp"

#include "ionchain/errors.hpp"

#include <cmath>
#include <numbers>

namespace ionchain {

UnitScales derive_scales(const PhysicalInputs& inputs) {
    if (!(inputs.lattice_period_m > 0.0))
        throw DomainError("derive_scales: lattice period must be positive");
    if (!(inputs.ion_mass_kg > 0.0))
        throw DomainError("derive_scales: ion mass must be positive");
    if (!(inputs.ion_charge_C > 0.0))
        throw DomainError("derive_scales: ion charge must be positive");

    const double q = inputs.ion_charge_C;
    const double m = inputs.ion_mass_kg;

    UnitScales s;
    s.length_m = inputs.lattice_period_m / (2.0 * std::numbers::pi);
    s.energy_J = q * q / (4.0 * std::numbers::pi * si::vacuum_permittivity * s.length_m);
    s.energy_eV = s.energy_J / si::elementary_charge;
    s.energy_K = s.energy_J / si::boltzmann;
    s.field_V_per_m = s.energy_J / (q * s.length_m);
    s.velocity_m_per_s = std::sqrt(s.energy_J / m);
    s.time_s = s.length_m * std::sqrt(m / s.energy_J);
    s.hbar_eff = si::planck_hbar / (s.length_m * std::sqrt(m * s.energy_J));
    return s;
}

double pinning_depth_kelvin(const UnitScales& scales, double kc) {
    if (!(kc > 0.0))
        throw DomainError("pinning_depth_kelvin: amplitude must be positive");
    return kc * scales.energy_K;
}

} // namespace ionchain

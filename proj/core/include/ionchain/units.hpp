#pragma once

namespace ionchain {

/// CODATA 2018 constants, SI. The charge, Boltzmann and Planck values are
/// exact by definition since the 2019 redefinition.
namespace si {
inline constexpr double elementary_charge = 1.602176634e-19;     // C
inline constexpr double planck_hbar = 1.054571817e-34;           // J s
inline constexpr double boltzmann = 1.380649e-23;                // J/K
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double atomic_mass_unit = 1.66053906660e-27;    // kg
} // namespace si

/** Physical description of one lattice-plus-ion setup. The model Hamiltonian
    is written in dimensionless units where the lattice period is 2*pi and the
    ion mass and charge are 1; these inputs fix what those units mean in SI.
*/
struct PhysicalInputs {
    double lattice_period_m = 1e-6;                    ///< lattice period, meters
    double ion_mass_kg = 40.0 * si::atomic_mass_unit;  ///< ion mass, kilograms
    double ion_charge_C = si::elementary_charge;       ///< ion charge, coulombs
};

/** Derived unit scales of the dimensionless model.

    length   r_a   = period / 2*pi
    energy   eps_a = q^2 / (4*pi*eps0*r_a)   (Coulomb energy of two ions at r_a)
    field    E_adc = eps_a / (q*r_a)
    velocity v_a   = sqrt(eps_a / m)
    time     t_a   = r_a * sqrt(m / eps_a)

    hbar_eff = hbar / (r_a * sqrt(m * eps_a)) is the dimensionless Planck
    constant: the ratio of hbar to the model's action scale. In Gaussian-style
    units, where eps_a = e^2/r_a, the same quantity reads
    hbar / (e * sqrt(m * r_a)).
*/
struct UnitScales {
    double length_m = 0.0;
    double energy_J = 0.0;
    double energy_eV = 0.0;
    double energy_K = 0.0;
    double field_V_per_m = 0.0;
    double velocity_m_per_s = 0.0;
    double time_s = 0.0;
    double hbar_eff = 0.0;

    double energy_to_si(double dimensionless) const { return dimensionless * energy_J; }
    double energy_from_si(double joules) const { return joules / energy_J; }
    double length_to_si(double dimensionless) const { return dimensionless * length_m; }
    double length_from_si(double meters) const { return meters / length_m; }
    double time_to_si(double dimensionless) const { return dimensionless * time_s; }
};

/// Compute all unit scales from the physical setup.
/// Throws DomainError unless every input is strictly positive.
UnitScales derive_scales(const PhysicalInputs& inputs);

/// Depth of the pinning potential in temperature units: kc * eps_a / k_B,
/// for a dimensionless lattice amplitude kc > 0.
double pinning_depth_kelvin(const UnitScales& scales, double kc);

/// Convenience: ion mass in kg from a mass number in amu.
inline double mass_kg_from_amu(double amu) { return amu * si::atomic_mass_unit; }

} // namespace ionchain

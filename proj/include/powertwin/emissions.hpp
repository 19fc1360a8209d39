#pragma once

#include <span>
#include <vector>

namespace powertwin::emissions {

/// Physical constants for the instantaneous CO2 rates.
struct EmissionFactors {
    double phi = 38.5;            ///< grid factor, g CO2 per kWh
    double gasoline = 2310.0;     ///< F_g, g CO2 per litre of gasoline
    double ethanol = 1510.0;      ///< F_e, g CO2 per litre of ethanol
    double ethanol_share = 0.0;   ///< P, volumetric ethanol percentage [0, 100]
    double afr = 14.7;            ///< stoichiometric air-fuel ratio
    double fuel_density = 740.0;  ///< g/L

    /// Throws InputError unless every factor is strictly positive and the
    /// ethanol share lies in [0, 100].
    void validate() const;
};

struct ElectricalSample {
    double battery_voltage = 0.0; ///< V
    double battery_current = 0.0; ///< A, positive while discharging
};

/// EV rate in g/s from battery power and the grid factor. Regeneration
/// (negative current) is not credited and yields 0.
double ev_rate(const ElectricalSample& sample, const EmissionFactors& factors);

/// ICEV rate in g/s from speed (km/h) and efficiency K (km/L) for the
/// configured gasoline/ethanol blend. Zero speed yields 0 for any K.
double icev_rate(double velocity_kmh, double efficiency_km_per_l, const EmissionFactors& factors);

/// Blend emission factor in g/L: (1 - P/100) F_g + (P/100) F_e.
double blend_factor(const EmissionFactors& factors);

/// Fuel volume flow in L/h from mass air flow (g/s) via AFR and fuel density.
double fuel_flow_from_maf(double maf_gps, const EmissionFactors& factors);
/// Fuel volume flow in L/h from fuel mass flow (g/s).
double fuel_flow_from_mass(double fuel_gps, const EmissionFactors& factors);
/// Fuel volume flow in L/h from cc/s.
double fuel_flow_from_ccps(double ccps);

/// K = v / fuel flow, in km/L. Throws InputError on non-positive fuel flow.
double efficiency_k(double velocity_kmh, double fuel_flow_lph);

/// Mass rate in g/s of a gas measured as volume flow in m³/min.
double co2_volume_to_mass(double flow_m3_per_min, double density_g_per_m3, double dilution);

/// ICEV rate from a fuel volume flow; 0 at zero fuel flow or zero speed.
double icev_rate_from_fuel_flow(double velocity_kmh, double fuel_flow_lph, const EmissionFactors& factors);

// Series kernels. The serial versions are the reference; the parallel ones
// split the index range across OpenMP threads and are bitwise identical.

std::vector<double> ev_rate_series_serial(std::span<const ElectricalSample> samples, const EmissionFactors& factors);
std::vector<double> ev_rate_series(std::span<const ElectricalSample> samples, const EmissionFactors& factors);

std::vector<double> icev_rate_series_serial(std::span<const double> velocity_kmh, std::span<const double> fuel_flow_lph,
                                            const EmissionFactors& factors);
std::vector<double> icev_rate_series(std::span<const double> velocity_kmh, std::span<const double> fuel_flow_lph,
                                     const EmissionFactors& factors);

} // namespace powertwin::emissions

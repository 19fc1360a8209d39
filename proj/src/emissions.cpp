#include "powertwin/emissions.hpp"

#include "powertwin/error.hpp"

#include <cmath>
#include <string>

namespace powertwin::emissions {

void EmissionFactors::validate() const
{
    const auto positive = [](double v, const char* name) {
        if (!(std::isfinite(v) && v > 0.0)) {
            throw InputError(std::string("emission factor ") + name + " must be positive, got " + std::to_string(v));
        }
    };
    positive(phi, "phi");
    positive(gasoline, "gasoline");
    positive(ethanol, "ethanol");
    positive(afr, "afr");
    positive(fuel_density, "fuel_density");
    if (!(ethanol_share >= 0.0 && ethanol_share <= 100.0)) {
        throw InputError("ethanol_share must lie in [0, 100], got " + std::to_string(ethanol_share));
    }
}

double ev_rate(const ElectricalSample& sample, const EmissionFactors& factors)
{
    if (!std::isfinite(sample.battery_voltage) || !std::isfinite(sample.battery_current)) {
        throw InputError("ev_rate: non-finite battery voltage or current");
    }
    if (!(factors.phi > 0.0)) {
        throw InputError("ev_rate: phi must be positive");
    }
    if (sample.battery_current < 0.0) {
        return 0.0;
    }
    const double power_w = std::abs(sample.battery_current * sample.battery_voltage);
    return (power_w / 1000.0) * (factors.phi / 3600.0);
}

double blend_factor(const EmissionFactors& factors)
{
    const double share = factors.ethanol_share / 100.0;
    return (1.0 - share) * factors.gasoline + share * factors.ethanol;
}

double icev_rate(double velocity_kmh, double efficiency_km_per_l, const EmissionFactors& factors)
{
    if (!std::isfinite(velocity_kmh) || !std::isfinite(efficiency_km_per_l)) {
        throw InputError("icev_rate: non-finite velocity or efficiency");
    }
    if (velocity_kmh == 0.0) {
        return 0.0;
    }
    if (!(efficiency_km_per_l > 0.0)) {
        throw InputError("icev_rate: efficiency K must be positive when moving (v=" + std::to_string(velocity_kmh) +
                         ", K=" + std::to_string(efficiency_km_per_l) + ")");
    }
    return velocity_kmh / (3600.0 * efficiency_km_per_l) * blend_factor(factors);
}

double fuel_flow_from_maf(double maf_gps, const EmissionFactors& factors)
{
    return (maf_gps / factors.afr) / factors.fuel_density * 3600.0;
}

double fuel_flow_from_mass(double fuel_gps, const EmissionFactors& factors)
{
    return fuel_gps / factors.fuel_density * 3600.0;
}

double fuel_flow_from_ccps(double ccps)
{
    return ccps / 1000.0 * 3600.0;
}

double efficiency_k(double velocity_kmh, double fuel_flow_lph)
{
    if (!(fuel_flow_lph > 0.0)) {
        throw InputError("efficiency_k: fuel flow must be positive (idle), got " + std::to_string(fuel_flow_lph));
    }
    return velocity_kmh / fuel_flow_lph;
}

double co2_volume_to_mass(double flow_m3_per_min, double density_g_per_m3, double dilution)
{
    return (flow_m3_per_min / 60.0) * density_g_per_m3 * dilution;
}

double icev_rate_from_fuel_flow(double velocity_kmh, double fuel_flow_lph, const EmissionFactors& factors)
{
    if (!(std::isfinite(velocity_kmh) && velocity_kmh >= 0.0)) {
        throw InputError("icev_rate: velocity must be finite and non-negative");
    }
    if (!(fuel_flow_lph > 0.0) || velocity_kmh == 0.0) {
        return 0.0;
    }
    return icev_rate(velocity_kmh, efficiency_k(velocity_kmh, fuel_flow_lph), factors);
}

std::vector<double> ev_rate_series_serial(std::span<const ElectricalSample> samples, const EmissionFactors& factors)
{
    std::vector<double> out(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        out[i] = ev_rate(samples[i], factors);
    }
    return out;
}

std::vector<double> ev_rate_series(std::span<const ElectricalSample> samples, const EmissionFactors& factors)
{
    if (!(factors.phi > 0.0)) {
        throw InputError("ev_rate: phi must be positive");
    }
    std::vector<double> out(samples.size());
    const auto n = static_cast<std::ptrdiff_t>(samples.size());
    bool bad = false;
#pragma omp parallel for schedule(static) reduction(|| : bad)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto& s = samples[static_cast<std::size_t>(i)];
        if (!std::isfinite(s.battery_voltage) || !std::isfinite(s.battery_current)) {
            bad = true;
            continue;
        }
        out[static_cast<std::size_t>(i)] = ev_rate(s, factors);
    }
    if (bad) {
        throw InputError("ev_rate: non-finite battery voltage or current");
    }
    return out;
}

static void check_lengths(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) {
        throw DimensionError("icev_rate_series: velocity and fuel-flow lengths differ");
    }
}

std::vector<double> icev_rate_series_serial(std::span<const double> velocity_kmh, std::span<const double> fuel_flow_lph,
                                            const EmissionFactors& factors)
{
    check_lengths(velocity_kmh, fuel_flow_lph);
    std::vector<double> out(velocity_kmh.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = icev_rate_from_fuel_flow(velocity_kmh[i], fuel_flow_lph[i], factors);
    }
    return out;
}

std::vector<double> icev_rate_series(std::span<const double> velocity_kmh, std::span<const double> fuel_flow_lph,
                                     const EmissionFactors& factors)
{
    check_lengths(velocity_kmh, fuel_flow_lph);
    std::vector<double> out(velocity_kmh.size());
    const auto n = static_cast<std::ptrdiff_t>(out.size());
    bool bad = false;
#pragma omp parallel for schedule(static) reduction(|| : bad)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        if (!(std::isfinite(velocity_kmh[k]) && velocity_kmh[k] >= 0.0)) {
            bad = true;
            continue;
        }
        out[k] = icev_rate_from_fuel_flow(velocity_kmh[k], fuel_flow_lph[k], factors);
    }
    if (bad) {
        throw InputError("icev_rate: velocity must be finite and non-negative");
    }
    return out;
}

} // namespace powertwin::emissions

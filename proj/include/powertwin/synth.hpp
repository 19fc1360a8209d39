#pragma once

#include "powertwin/emissions.hpp"
#include "powertwin/schema.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace powertwin::synth {

/// A synthetic fleet with known smooth maps: actuation u* = F(x) from the
/// driving context and EV emissions e* = G(v, u). Measured actuation and
/// emissions carry bounded uniform noise.
struct WorldSpec {
    std::uint64_t seed = 0;
    std::size_t ev_trips = 30;
    std::size_t icev_trips = 6;
    std::size_t samples_per_trip = 600;
    double emission_noise = 0.004;  ///< half-width of the uniform noise on e, g/s
    double torque_noise = 1.0;      ///< half-width, Nm
    double throttle_noise = 0.5;    ///< half-width, %
};

struct World {
    std::vector<Trip> ev_trips;
    std::vector<Trip> icev_trips;
};

/// F: EV torque (Nm) and throttle (%) for a context sample.
ActuationVector true_actuation(const ContextVector& x);
/// G: EV CO2 rate (g/s) for velocity and actuation.
double true_ev_rate(double velocity, double torque, double throttle);
/// G(v, F(x)) for every sample of a trip: the noise-free counterfactual.
std::vector<double> oracle_counterfactual(const Trip& trip);

/// Mean absolute value of uniform noise of half-width b: b / 2.
inline double noise_floor(double half_width)
{
    return half_width / 2.0;
}

World make_world(const WorldSpec& spec);

/// Writes one i3-format file per EV trip (`;` separated, battery voltage and
/// current chosen so that the EV rate formula recovers co2_rate).
void write_i3_raw(const std::filesystem::path& dir, const std::vector<Trip>& trips,
                  const emissions::EmissionFactors& factors);
/// Writes one QX50 dyno file per ICEV trip ("<id> Test Data.txt", tab separated,
/// MAF chosen so that the ICEV rate formula recovers co2_rate). Trip ids must be numeric.
void write_qx50_raw(const std::filesystem::path& dir, const std::vector<Trip>& trips,
                    const emissions::EmissionFactors& factors);

} // namespace powertwin::synth

#include "powertwin/error.hpp"
#include "powertwin/ingest.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <string>

namespace powertwin::ingest {

double convert_speed_mph_to_kmh(double mph)
{
    return mph * kKmhPerMph;
}

double derive_wheel_rpm(double velocity_kmh)
{
    return kWheelRpmPerKmh * velocity_kmh;
}

double wheel_radius_from_rpm_factor(double rpm_per_kmh)
{
    // rpm = (v * 1000 / 60) / (2 pi R)
    return 1000.0 / (60.0 * 2.0 * std::numbers::pi * rpm_per_kmh);
}

double torque_from_tractive_force(double force_n, double radius_m)
{
    if (!(radius_m > 0.0)) {
        throw InputError("wheel radius must be positive, got " + std::to_string(radius_m));
    }
    return force_n * radius_m;
}

std::vector<double> derive_acceleration(std::span<const double> time_s, std::span<const double> velocity_kmh)
{
    if (time_s.size() != velocity_kmh.size()) {
        throw DimensionError("derive_acceleration: time and velocity lengths differ");
    }
    std::vector<double> accel(time_s.size(), 0.0);
    for (std::size_t i = 1; i < time_s.size(); ++i) {
        const double dt = time_s[i] - time_s[i - 1];
        if (!(dt > 0.0)) {
            throw std::logic_error("derive_acceleration: non-positive time step at sample " + std::to_string(i) +
                                   " (rows must be integrity-filtered first)");
        }
        accel[i] = (velocity_kmh[i] / 3.6 - velocity_kmh[i - 1] / 3.6) / dt;
    }
    return accel;
}

Trip derive_acceleration(Trip trip)
{
    std::vector<double> t(trip.samples.size());
    std::vector<double> v(trip.samples.size());
    for (std::size_t i = 0; i < trip.samples.size(); ++i) {
        t[i] = trip.samples[i].time;
        v[i] = trip.samples[i].velocity;
    }
    const auto a = derive_acceleration(t, v);
    for (std::size_t i = 0; i < trip.samples.size(); ++i) {
        trip.samples[i].longitudinal_accel = a[i];
    }
    return trip;
}

std::vector<double> throttle_proxy_from_fuel_flow(std::span<const double> flow)
{
    std::vector<double> out(flow.size(), 0.0);
    if (flow.empty()) {
        return out;
    }
    const auto [lo, hi] = std::minmax_element(flow.begin(), flow.end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) {
        return out;
    }
    for (std::size_t i = 0; i < flow.size(); ++i) {
        out[i] = (flow[i] - *lo) / range * 100.0;
    }
    return out;
}

} // namespace powertwin::ingest

#include "powertwin/synth.hpp"

#include "powertwin/error.hpp"
#include "powertwin/ingest.hpp"
#include "powertwin/rng.hpp"
#include "powertwin/table_io.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace powertwin::synth {

namespace {

double softplus(double x)
{
    return x > 30.0 ? x : std::log1p(std::exp(x));
}

double sigmoid(double x)
{
    return 1.0 / (1.0 + std::exp(-x));
}

struct Profile {
    double base;
    double a1;
    double p1;
    double ph1;
    double a2;
    double p2;
    double ph2;
    double ambient;
    double cabin_wave;
};

Profile draw_profile(rng::Engine& g)
{
    Profile p{};
    p.base = rng::uniform(g, 20.0, 60.0);
    p.a1 = rng::uniform(g, 10.0, 30.0);
    p.p1 = rng::uniform(g, 60.0, 200.0);
    p.ph1 = rng::uniform(g, 0.0, 2.0 * std::numbers::pi);
    p.a2 = rng::uniform(g, 3.0, 10.0);
    p.p2 = rng::uniform(g, 15.0, 40.0);
    p.ph2 = rng::uniform(g, 0.0, 2.0 * std::numbers::pi);
    p.ambient = rng::uniform(g, 5.0, 30.0);
    p.cabin_wave = rng::uniform(g, 0.5, 2.0);
    return p;
}

// Time, velocity, temperatures and derived acceleration; actuation and CO2 left at 0.
Trip drive(const std::string& id, Domain domain, const std::string& vehicle, std::size_t n, rng::Engine& g)
{
    const Profile p = draw_profile(g);
    Trip trip{id, domain, vehicle, std::vector<HarmonizedSample>(n)};
    const double two_pi = 2.0 * std::numbers::pi;
    double t = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) {
            t += rng::uniform(g, 0.95, 1.05);
        }
        auto& s = trip.samples[k];
        s.time = t;
        s.velocity = std::max(0.0, p.base + p.a1 * std::sin(two_pi * t / p.p1 + p.ph1) +
                                       p.a2 * std::sin(two_pi * t / p.p2 + p.ph2));
        s.ambient_temp = p.ambient;
        s.cabin_temp = 21.0 + (p.ambient - 21.0) * std::exp(-t / 300.0) + p.cabin_wave * std::sin(two_pi * t / 240.0);
    }
    return ingest::derive_acceleration(std::move(trip));
}

} // namespace

ActuationVector true_actuation(const ContextVector& x)
{
    ActuationVector u;
    u.motor_torque = 60.0 * x.longitudinal_accel + 0.8 * x.velocity + 0.5 * (x.ambient_temp - 20.0) +
                     0.3 * (x.cabin_temp - x.ambient_temp);
    u.throttle = 100.0 * sigmoid(1.5 * x.longitudinal_accel + 0.02 * x.velocity - 1.0);
    return u;
}

double true_ev_rate(double velocity, double torque, double throttle)
{
    return 0.004 + 0.0005 * softplus(torque * velocity / 100.0) + 0.0002 * throttle;
}

std::vector<double> oracle_counterfactual(const Trip& trip)
{
    std::vector<double> out;
    out.reserve(trip.size());
    for (const auto& s : trip.samples) {
        const auto u = true_actuation({s.velocity, s.ambient_temp, s.cabin_temp, s.longitudinal_accel});
        out.push_back(true_ev_rate(s.velocity, u.motor_torque, u.throttle));
    }
    return out;
}

World make_world(const WorldSpec& spec)
{
    World world;
    rng::Engine g(rng::derive_seed(spec.seed, 100));
    for (std::size_t i = 0; i < spec.ev_trips; ++i) {
        Trip trip = drive("ev" + std::to_string(1000 + i), Domain::EV, "synthetic-ev", spec.samples_per_trip, g);
        for (auto& s : trip.samples) {
            const auto u = true_actuation({s.velocity, s.ambient_temp, s.cabin_temp, s.longitudinal_accel});
            s.motor_torque = u.motor_torque + rng::uniform(g, -spec.torque_noise, spec.torque_noise);
            s.throttle = u.throttle + rng::uniform(g, -spec.throttle_noise, spec.throttle_noise);
            const double e = true_ev_rate(s.velocity, s.motor_torque, s.throttle) +
                             rng::uniform(g, -spec.emission_noise, spec.emission_noise);
            s.co2_rate = std::max(0.0, e);
        }
        world.ev_trips.push_back(std::move(trip));
    }
    for (std::size_t i = 0; i < spec.icev_trips; ++i) {
        Trip trip = drive(std::to_string(7000 + i), Domain::ICEV, "synthetic-icev", spec.samples_per_trip, g);
        for (auto& s : trip.samples) {
            const double a = s.longitudinal_accel;
            s.motor_torque = std::max(0.0, 40.0 + 90.0 * a + 0.6 * s.velocity);
            s.throttle = std::clamp(12.0 + 25.0 * a + 0.15 * s.velocity, 0.0, 100.0);
            s.co2_rate = s.velocity > 0.0 ? 0.6 + 0.025 * s.velocity + 0.9 * std::max(a, 0.0) : 0.0;
        }
        world.icev_trips.push_back(std::move(trip));
    }
    return world;
}

void write_i3_raw(const std::filesystem::path& dir, const std::vector<Trip>& trips,
                  const emissions::EmissionFactors& factors)
{
    std::filesystem::create_directories(dir);
    for (const auto& trip : trips) {
        std::string text =
            "Time [s];Velocity [km/h];Throttle [%];Motor Torque [Nm];Longitudinal Acceleration [m/s^2];"
            "Battery Voltage [V];Battery Current [A];Ambient Temperature [\xC2\xB0" "C];"
            "Cabin Temperature Sensor [\xC2\xB0" "C]\n";
        for (std::size_t k = 0; k < trip.size(); ++k) {
            const auto& s = trip.samples[k];
            const double voltage = 360.0 + 5.0 * std::sin(static_cast<double>(k) / 50.0);
            const double current = s.co2_rate * 3600.0 * 1000.0 / (factors.phi * voltage);
            text += io::format_double(s.time) + ";" + io::format_double(s.velocity) + ";" +
                    io::format_double(s.throttle) + ";" + io::format_double(s.motor_torque) + ";" +
                    io::format_double(s.longitudinal_accel) + ";" + io::format_double(voltage) + ";" +
                    io::format_double(current) + ";" + io::format_double(s.ambient_temp) + ";" +
                    io::format_double(s.cabin_temp) + "\n";
        }
        io::write_text_file(dir / (trip.trip_id + ".csv"), text);
    }
}

void write_qx50_raw(const std::filesystem::path& dir, const std::vector<Trip>& trips,
                    const emissions::EmissionFactors& factors)
{
    std::filesystem::create_directories(dir);
    const double blend = emissions::blend_factor(factors);
    for (const auto& trip : trips) {
        if (trip.trip_id.empty() ||
            !std::all_of(trip.trip_id.begin(), trip.trip_id.end(), [](unsigned char c) { return std::isdigit(c); })) {
            throw InputError("QX50 trip ids must be numeric, got '" + trip.trip_id + "'");
        }
        std::string text = "Time[s]\tDyno_Spd[mph]\tEng_torque_TCM[Nm]\tPedal_accel_CAN2[per]\tCell_Temp[C]\t"
                           "Cabin_Temp[C]\tEng_MAF_total_ECM[gps]\n";
        for (const auto& s : trip.samples) {
            const double maf = s.co2_rate * factors.fuel_density * factors.afr / blend;
            text += io::format_double(s.time) + "\t" + io::format_double(s.velocity / ingest::kKmhPerMph) + "\t" +
                    io::format_double(s.motor_torque) + "\t" + io::format_double(s.throttle) + "\t" +
                    io::format_double(s.ambient_temp) + "\t" + io::format_double(s.cabin_temp) + "\t" +
                    io::format_double(maf) + "\n";
        }
        io::write_text_file(dir / (trip.trip_id + " Test Data.txt"), text);
    }
}

} // namespace powertwin::synth

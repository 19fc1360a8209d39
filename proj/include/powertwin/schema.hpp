#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace powertwin {

enum class Domain : std::uint8_t { EV, ICEV };

std::string_view to_string(Domain domain);
/// Accepts "ev"/"icev" in any case.
Domain parse_domain(std::string_view text);

/// One timestep of the unified telemetry schema.
struct HarmonizedSample {
    double time = 0.0;                 ///< s, strictly increasing within a trip
    double velocity = 0.0;             ///< km/h
    double throttle = 0.0;             ///< %
    double motor_torque = 0.0;         ///< Nm
    double ambient_temp = 0.0;         ///< °C
    double cabin_temp = 0.0;           ///< °C
    std::optional<double> heat_exchanger_temp; ///< °C, carried but unused by the models
    double longitudinal_accel = 0.0;   ///< m/s²
    double co2_rate = 0.0;             ///< g/s

    bool operator==(const HarmonizedSample&) const = default;
};

struct Trip {
    std::string trip_id;
    Domain domain = Domain::EV;
    std::string vehicle;
    std::vector<HarmonizedSample> samples;

    std::size_t size() const { return samples.size(); }
};

/// Driving context shared by both powertrains.
struct ContextVector {
    double velocity = 0.0;
    double ambient_temp = 0.0;
    double cabin_temp = 0.0;
    double longitudinal_accel = 0.0;

    bool operator==(const ContextVector&) const = default;
};

/// Domain-specific actuation: traction torque and throttle.
struct ActuationVector {
    double motor_torque = 0.0;
    double throttle = 0.0;

    bool operator==(const ActuationVector&) const = default;
};

/// Numeric channels of a HarmonizedSample addressable by the models and scalers.
enum class Channel : std::uint8_t {
    Time,
    Velocity,
    Throttle,
    MotorTorque,
    AmbientTemp,
    CabinTemp,
    HeatExchangerTemp,
    LongitudinalAccel,
    Co2Rate,
};

std::string_view channel_name(Channel channel);
Channel parse_channel(std::string_view name);
/// Value of `channel` in `sample`; NaN for an absent optional channel.
double channel_value(const HarmonizedSample& sample, Channel channel);
void set_channel_value(HarmonizedSample& sample, Channel channel, double value);

inline constexpr std::array<Channel, 4> kContextChannels{
    Channel::Velocity, Channel::AmbientTemp, Channel::CabinTemp, Channel::LongitudinalAccel};
inline constexpr std::array<Channel, 2> kActuationChannels{Channel::MotorTorque, Channel::Throttle};
/// Emissions-model input triplet: speed plus actuation.
inline constexpr std::array<Channel, 3> kEmissionsInputChannels{
    Channel::Velocity, Channel::MotorTorque, Channel::Throttle};

/// Throws SchemaError when the trip is empty, carries non-finite required
/// channels, has non-increasing time, or violates the sample invariants.
void validate_trip(const Trip& trip);

/// One ContextVector per sample. Throws SchemaError naming the first missing
/// (non-finite) channel, or when the trip is empty.
std::vector<ContextVector> context_of(const Trip& trip);
std::vector<ActuationVector> actuation_of(const Trip& trip);

// Harmonized trip file -------------------------------------------------------

/// Column header of the harmonized trip file, in order.
inline constexpr std::array<std::string_view, 10> kHarmonizedColumns{
    "Time [s]",
    "Velocity [km/h]",
    "Throttle [%]",
    "Motor Torque [Nm]",
    "Ambient Temperature [C]",
    "Cabin Temperature [C]",
    "Heat Exchanger Temperature [C]",
    "Longitudinal Acceleration [m/s2]",
    "CO2 [g/s]",
    "Trip",
};

/// Serialises trips (all rows, trips in the given order) to harmonized text.
/// `comments` are written as leading `#` lines.
std::string format_harmonized(const std::vector<Trip>& trips, const std::vector<std::string>& comments = {});
/// Parses harmonized text; rows are grouped into trips in order of first appearance.
std::vector<Trip> parse_harmonized(std::string_view text, Domain domain, const std::string& vehicle);

void write_harmonized(const std::filesystem::path& path, const std::vector<Trip>& trips,
                      const std::vector<std::string>& comments = {});
std::vector<Trip> read_harmonized(const std::filesystem::path& path, Domain domain, const std::string& vehicle);

} // namespace powertwin

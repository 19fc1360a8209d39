#include "powertwin/schema.hpp"

#include "powertwin/error.hpp"
#include "powertwin/table_io.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

namespace powertwin {

std::string_view to_string(Domain domain)
{
    return domain == Domain::EV ? "EV" : "ICEV";
}

Domain parse_domain(std::string_view text)
{
    const std::string t = io::normalize_header(text);
    if (t == "ev") {
        return Domain::EV;
    }
    if (t == "icev") {
        return Domain::ICEV;
    }
    throw ConfigError("unknown domain '" + std::string(text) + "' (expected ev or icev)");
}

namespace {

struct ChannelInfo {
    Channel channel;
    std::string_view name;
};

constexpr std::array<ChannelInfo, 9> kChannelInfo{{
    {Channel::Time, "time"},
    {Channel::Velocity, "velocity"},
    {Channel::Throttle, "throttle"},
    {Channel::MotorTorque, "motor_torque"},
    {Channel::AmbientTemp, "ambient_temp"},
    {Channel::CabinTemp, "cabin_temp"},
    {Channel::HeatExchangerTemp, "heat_exchanger_temp"},
    {Channel::LongitudinalAccel, "longitudinal_accel"},
    {Channel::Co2Rate, "co2_rate"},
}};

} // namespace

std::string_view channel_name(Channel channel)
{
    return kChannelInfo[static_cast<std::size_t>(channel)].name;
}

Channel parse_channel(std::string_view name)
{
    for (const auto& info : kChannelInfo) {
        if (info.name == name) {
            return info.channel;
        }
    }
    throw SchemaError("unknown channel '" + std::string(name) + "'");
}

double channel_value(const HarmonizedSample& s, Channel channel)
{
    switch (channel) {
    case Channel::Time: return s.time;
    case Channel::Velocity: return s.velocity;
    case Channel::Throttle: return s.throttle;
    case Channel::MotorTorque: return s.motor_torque;
    case Channel::AmbientTemp: return s.ambient_temp;
    case Channel::CabinTemp: return s.cabin_temp;
    case Channel::HeatExchangerTemp:
        return s.heat_exchanger_temp.value_or(std::numeric_limits<double>::quiet_NaN());
    case Channel::LongitudinalAccel: return s.longitudinal_accel;
    case Channel::Co2Rate: return s.co2_rate;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

void set_channel_value(HarmonizedSample& s, Channel channel, double value)
{
    switch (channel) {
    case Channel::Time: s.time = value; break;
    case Channel::Velocity: s.velocity = value; break;
    case Channel::Throttle: s.throttle = value; break;
    case Channel::MotorTorque: s.motor_torque = value; break;
    case Channel::AmbientTemp: s.ambient_temp = value; break;
    case Channel::CabinTemp: s.cabin_temp = value; break;
    case Channel::HeatExchangerTemp:
        if (std::isnan(value)) {
            s.heat_exchanger_temp.reset();
        } else {
            s.heat_exchanger_temp = value;
        }
        break;
    case Channel::LongitudinalAccel: s.longitudinal_accel = value; break;
    case Channel::Co2Rate: s.co2_rate = value; break;
    }
}

static void require_finite(const Trip& trip, std::size_t index, Channel channel)
{
    if (!std::isfinite(channel_value(trip.samples[index], channel))) {
        throw SchemaError("trip '" + trip.trip_id + "': missing channel " + std::string(channel_name(channel)) +
                          " at sample " + std::to_string(index));
    }
}

void validate_trip(const Trip& trip)
{
    if (trip.samples.empty()) {
        throw SchemaError("trip '" + trip.trip_id + "' is empty");
    }
    constexpr std::array<Channel, 8> required{Channel::Time,        Channel::Velocity,  Channel::Throttle,
                                              Channel::MotorTorque, Channel::AmbientTemp, Channel::CabinTemp,
                                              Channel::LongitudinalAccel, Channel::Co2Rate};
    for (std::size_t i = 0; i < trip.samples.size(); ++i) {
        for (Channel c : required) {
            require_finite(trip, i, c);
        }
        const auto& s = trip.samples[i];
        if (s.co2_rate < 0.0) {
            throw SchemaError("trip '" + trip.trip_id + "': negative co2_rate at sample " + std::to_string(i));
        }
        if (s.velocity < 0.0) {
            throw SchemaError("trip '" + trip.trip_id + "': negative velocity at sample " + std::to_string(i));
        }
        if (i > 0 && !(s.time > trip.samples[i - 1].time)) {
            throw SchemaError("trip '" + trip.trip_id + "': non-increasing time at sample " + std::to_string(i));
        }
    }
}

std::vector<ContextVector> context_of(const Trip& trip)
{
    if (trip.samples.empty()) {
        throw SchemaError("trip '" + trip.trip_id + "' is empty");
    }
    std::vector<ContextVector> out;
    out.reserve(trip.samples.size());
    for (std::size_t i = 0; i < trip.samples.size(); ++i) {
        for (Channel c : kContextChannels) {
            require_finite(trip, i, c);
        }
        const auto& s = trip.samples[i];
        out.push_back({s.velocity, s.ambient_temp, s.cabin_temp, s.longitudinal_accel});
    }
    return out;
}

std::vector<ActuationVector> actuation_of(const Trip& trip)
{
    if (trip.samples.empty()) {
        throw SchemaError("trip '" + trip.trip_id + "' is empty");
    }
    std::vector<ActuationVector> out;
    out.reserve(trip.samples.size());
    for (std::size_t i = 0; i < trip.samples.size(); ++i) {
        for (Channel c : kActuationChannels) {
            require_finite(trip, i, c);
        }
        out.push_back({trip.samples[i].motor_torque, trip.samples[i].throttle});
    }
    return out;
}

std::string format_harmonized(const std::vector<Trip>& trips, const std::vector<std::string>& comments)
{
    std::string out;
    for (const auto& c : comments) {
        out += "# " + c + "\n";
    }
    for (std::size_t i = 0; i < kHarmonizedColumns.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += kHarmonizedColumns[i];
    }
    out += '\n';
    for (const auto& trip : trips) {
        if (trip.trip_id.empty() || trip.trip_id.find_first_of(",\n\r") != std::string::npos) {
            throw SchemaError("trip id '" + trip.trip_id + "' cannot be written to a harmonized file");
        }
        for (const auto& s : trip.samples) {
            const double hx = s.heat_exchanger_temp.value_or(std::numeric_limits<double>::quiet_NaN());
            for (double v : {s.time, s.velocity, s.throttle, s.motor_torque, s.ambient_temp, s.cabin_temp, hx,
                             s.longitudinal_accel, s.co2_rate}) {
                out += io::format_double(v);
                out += ',';
            }
            out += trip.trip_id;
            out += '\n';
        }
    }
    return out;
}

std::vector<Trip> parse_harmonized(std::string_view text, Domain domain, const std::string& vehicle)
{
    const io::TextTable table = io::parse_delimited(text, ',');
    if (table.header.size() != kHarmonizedColumns.size()) {
        throw SchemaError("harmonized file: expected " + std::to_string(kHarmonizedColumns.size()) + " columns, got " +
                          std::to_string(table.header.size()));
    }
    for (std::size_t i = 0; i < kHarmonizedColumns.size(); ++i) {
        if (io::normalize_header(table.header[i]) != io::normalize_header(kHarmonizedColumns[i])) {
            throw SchemaError("harmonized file: column " + std::to_string(i) + " is '" + table.header[i] +
                              "', expected '" + std::string(kHarmonizedColumns[i]) + "'");
        }
    }
    std::vector<Trip> trips;
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != kHarmonizedColumns.size()) {
            throw SchemaError("harmonized file: row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                              " fields");
        }
        HarmonizedSample s;
        s.time = io::parse_double(row[0]);
        s.velocity = io::parse_double(row[1]);
        s.throttle = io::parse_double(row[2]);
        s.motor_torque = io::parse_double(row[3]);
        s.ambient_temp = io::parse_double(row[4]);
        s.cabin_temp = io::parse_double(row[5]);
        if (const double hx = io::parse_double(row[6]); !std::isnan(hx)) {
            s.heat_exchanger_temp = hx;
        }
        s.longitudinal_accel = io::parse_double(row[7]);
        s.co2_rate = io::parse_double(row[8]);
        const std::string& id = row[9];
        if (id.empty()) {
            throw SchemaError("harmonized file: row " + std::to_string(r + 1) + " has no trip id");
        }
        auto [it, inserted] = index.try_emplace(id, trips.size());
        if (inserted) {
            trips.push_back(Trip{id, domain, vehicle, {}});
        }
        trips[it->second].samples.push_back(s);
    }
    return trips;
}

void write_harmonized(const std::filesystem::path& path, const std::vector<Trip>& trips,
                      const std::vector<std::string>& comments)
{
    io::write_text_file(path, format_harmonized(trips, comments));
}

std::vector<Trip> read_harmonized(const std::filesystem::path& path, Domain domain, const std::string& vehicle)
{
    return parse_harmonized(io::read_text_file(path), domain, vehicle);
}

} // namespace powertwin

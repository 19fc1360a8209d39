#include "powertwin/error.hpp"
#include "powertwin/ingest.hpp"
#include "powertwin/table_io.hpp"

#include <cctype>

namespace powertwin::ingest {

std::vector<std::string> VehicleProfile::required_headers() const
{
    std::vector<std::string> out;
    for (const auto& c : required_columns) {
        out.push_back(c.headers.front());
    }
    return out;
}

namespace {

SourceColumn col(std::string key, std::vector<std::string> headers)
{
    return SourceColumn{std::move(key), std::move(headers)};
}

// Chassis-dyno channels shared by the three ICEV sources.
SourceColumn dyno_time() { return col("time", {"Time[s]", "Time"}); }
SourceColumn dyno_speed() { return col("speed_mph", {"Dyno_Spd[mph]", "Dyno_Spd"}); }
SourceColumn dyno_engine_torque() { return col("engine_torque", {"Eng_torque_TCM[Nm]", "Eng_torque_TCM"}); }
SourceColumn dyno_pedal() { return col("throttle", {"Pedal_accel_CAN2[per]", "Pedal_accel_CAN2_per", "Pedal_accel_CAN2"}); }
SourceColumn dyno_ambient() { return col("ambient", {"Cell_Temp[C]", "Cell_Temp"}); }
SourceColumn dyno_cabin() { return col("cabin", {"Cabin_Temp[C]", "Cabin_Temp"}); }
SourceColumn dyno_radiator() { return col("heat_exchanger", {"Radiator_Air_Outlet_Temp[C]", "Radiator_Air_Outlet_Temp"}); }
SourceColumn dyno_tractive_force() { return col("tractive_force", {"Dyno_TractiveForce[N]", "Dyno_TractiveForce"}); }
SourceColumn dyno_maf() { return col("maf", {"Eng_MAF_total_ECM[gps]", "Eng_MAF_total_ECM"}); }
SourceColumn dyno_fuel_gps() { return col("fuel_gps", {"Eng_FuelFlow_Direct2[gps]", "Eng_FuelFlow_Direct2"}); }
SourceColumn dyno_fuel_ccps() { return col("fuel_ccps", {"Eng_FuelFlow_Direct[ccps]", "Eng_FuelFlow_Direct"}); }
SourceColumn dyno_co2_flow() { return col("co2_m3min", {"CO2_Flow[m3/min]", "Exh_CO2_Flow[m3/min]"}); }

VehicleProfile i3()
{
    VehicleProfile p;
    p.name = "i3";
    p.vehicle = "i3";
    p.kind = VehicleKind::I3;
    p.domain = Domain::EV;
    p.required_columns = {
        col("time", {"Time [s]"}),
        col("velocity_kmh", {"Velocity [km/h]"}),
        col("throttle", {"Throttle [%]"}),
        col("torque", {"Motor Torque [Nm]"}),
        col("accel", {"Longitudinal Acceleration [m/s^2]", "Longitudinal Acceleration [m/s2]"}),
        col("voltage", {"Battery Voltage [V]"}),
        col("current", {"Battery Current [A]"}),
        col("ambient", {"Ambient Temperature [°C]", "Ambient Temperature [C]"}),
        col("cabin", {"Cabin Temperature Sensor [°C]", "Cabin Temperature [°C]"}),
    };
    p.optional_columns = {col("heat_exchanger", {"Heat Exchanger Temperature [°C]"})};
    return p;
}

VehicleProfile blazer()
{
    VehicleProfile p;
    p.name = "blazer";
    p.vehicle = "blazer";
    p.kind = VehicleKind::Blazer;
    p.domain = Domain::ICEV;
    p.required_columns = {dyno_time(), col("test_id", {"Test_ID"}), dyno_speed(), dyno_engine_torque(),
                          dyno_pedal(), dyno_ambient(), dyno_cabin()};
    p.optional_columns = {dyno_radiator()};
    p.required_any = {{dyno_maf(), dyno_fuel_ccps()}};
    p.trip_id_column = "Test_ID";
    p.corrupted_trip_ids = {"61177923.13997565"};
    p.require_integer_trip_ids = true;
    p.fuel_preference = {"maf", "fuel_ccps"};
    return p;
}

VehicleProfile pacifica()
{
    VehicleProfile p;
    p.name = "pacifica";
    p.vehicle = "pacifica";
    p.kind = VehicleKind::Pacifica;
    p.domain = Domain::ICEV;
    p.required_columns = {dyno_time(),     dyno_speed(),          dyno_ambient(),   dyno_radiator(),
                          dyno_cabin(),    dyno_tractive_force(), dyno_fuel_ccps()};
    p.optional_columns = {dyno_engine_torque(), dyno_co2_flow()};
    p.wheel_radius = kPacificaWheelRadius;
    p.fuel_preference = {"fuel_ccps"};
    p.outlier_torque_limit = 400.0;
    p.outlier_co2_limit = 25.0;
    return p;
}

VehicleProfile qx50(bool strict)
{
    VehicleProfile p;
    p.name = strict ? "qx50-strict" : "qx50";
    p.vehicle = "qx50";
    p.kind = VehicleKind::Qx50;
    p.domain = Domain::ICEV;
    p.required_columns = {dyno_time(), dyno_speed(), dyno_engine_torque(), dyno_pedal(), dyno_ambient(), dyno_cabin()};
    p.optional_columns = {dyno_radiator()};
    p.required_any = {{dyno_maf(), dyno_fuel_gps(), dyno_fuel_ccps()}};
    p.combined_trip_column = "Trip";
    p.numeric_trip_ids_from_filename = true;
    p.wheel_radius = wheel_radius_from_rpm_factor(kWheelRpmPerKmh);
    p.fuel_preference = {"maf", "fuel_gps", "fuel_ccps"};
    p.strict = strict;
    return p;
}

} // namespace

std::vector<std::string> profile_names()
{
    return {"i3", "blazer", "pacifica", "qx50", "qx50-strict"};
}

VehicleProfile profile_by_name(std::string_view name)
{
    if (name == "i3") {
        return i3();
    }
    if (name == "blazer") {
        return blazer();
    }
    if (name == "pacifica") {
        return pacifica();
    }
    if (name == "qx50") {
        return qx50(false);
    }
    if (name == "qx50-strict") {
        return qx50(true);
    }
    throw ConfigError("unknown vehicle profile '" + std::string(name) + "'");
}

std::string numeric_trip_id_from_filename(const std::filesystem::path& path)
{
    std::string stem = path.stem().string();
    std::string lowered;
    for (char c : stem) {
        lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (const auto pos = lowered.find("test data"); pos != std::string::npos) {
        stem.erase(pos, std::string("test data").size());
    }
    stem = io::trim(stem);
    std::string digits;
    for (char c : stem) {
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && !digits.empty())) {
            digits.push_back(c);
        } else if (!digits.empty()) {
            break;
        }
    }
    while (!digits.empty() && digits.back() == '.') {
        digits.pop_back();
    }
    return digits.empty() ? stem : digits;
}

} // namespace powertwin::ingest

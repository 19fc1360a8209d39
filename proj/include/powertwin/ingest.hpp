#pragma once

#include "powertwin/emissions.hpp"
#include "powertwin/schema.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace powertwin::ingest {

/// Row accounting for every filtering stage. Rule names are stable strings
/// (e.g. "negative_time", "duplicate_timestamp", "iqr_outlier").
struct FilterReport {
    std::size_t rows_in = 0;
    std::size_t rows_out = 0;
    std::map<std::string, std::size_t> dropped;
    std::vector<std::string> trips_dropped;
    /// (file, reason) for inputs rejected before any row was read.
    std::vector<std::pair<std::string, std::string>> rejected_files;

    void drop(std::string_view rule, std::size_t count = 1);
    std::size_t dropped_total() const;
    /// rows_in == rows_out + sum of dropped rows.
    bool reconciles() const;
    /// Chains a later stage: keeps this report's rows_in, takes `later`'s rows_out.
    void chain(const FilterReport& later);
    /// Adds an independent report (another file): sums rows_in and rows_out.
    void merge(const FilterReport& other);
};

/// `key = value` text with one line per count, trip and rejected file.
std::string format_filter_report(const FilterReport& report, const std::vector<std::string>& comments = {});

/// Source rows after column mapping: numeric channels under canonical keys
/// (NaN marks a missing value) plus a per-row trip identifier ("" if missing).
struct RawTable {
    std::string source;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> values; ///< values[column][row]
    std::vector<std::string> trip_ids;

    std::size_t rows() const { return trip_ids.size(); }
    bool has(std::string_view column) const;
    /// Throws SchemaError naming the column when absent.
    const std::vector<double>& at(std::string_view column) const;
    std::vector<double>& at(std::string_view column);
    void add_column(std::string name, std::vector<double> data);
    RawTable select_rows(std::span<const char> keep) const;

    bool operator==(const RawTable&) const;
};

struct IntegrityRules {
    std::string time_column = "time";
    /// Rows with a negative value in any of these (present) columns are dropped
    /// under the rule "negative_<column>".
    std::vector<std::string> non_negative_columns;
    /// Rows with NaN in any of these columns are dropped as "missing_value".
    std::vector<std::string> required_columns;
    /// Rows whose every column of a group is NaN are dropped as "missing_value".
    std::vector<std::vector<std::string>> required_any;
    /// Longest run of missing trip ids filled from the last seen id.
    std::size_t trip_id_fill_limit = 50;
    std::vector<std::string> corrupted_trip_ids;
    /// Non-integer trip ids mark corrupted trips.
    bool require_integer_trip_ids = false;
};

/// Forward-fills short trip-id gaps, then drops unresolved ids, corrupted trips,
/// missing values, negative timestamps, negative guarded channels and, per trip,
/// samples whose time does not exceed the last kept one. Surviving rows keep
/// their order. Throws EmptyTripError when nothing survives.
std::pair<RawTable, FilterReport> integrity_filter(const RawTable& table, const IntegrityRules& rules);

// Unit conversions and derived channels -----------------------------------------

inline constexpr double kKmhPerMph = 1.609344;
/// Wheel revolutions per minute per km/h for the QX50's 19-inch wheels.
inline constexpr double kWheelRpmPerKmh = 7.150;
inline constexpr double kPacificaWheelRadius = 0.3;

double convert_speed_mph_to_kmh(double mph);
double derive_wheel_rpm(double velocity_kmh);
/// Rolling radius (m) implied by an rpm-per-km/h factor.
double wheel_radius_from_rpm_factor(double rpm_per_kmh);
double torque_from_tractive_force(double force_n, double radius_m);

/// Finite-difference acceleration in m/s² on the given (irregular) time base;
/// first element 0, no smoothing. Throws std::logic_error when Δt <= 0.
std::vector<double> derive_acceleration(std::span<const double> time_s, std::span<const double> velocity_kmh);
Trip derive_acceleration(Trip trip);

/// Per-trip min-max normalisation of fuel flow to [0, 100] %. A constant
/// series maps to all zeros.
std::vector<double> throttle_proxy_from_fuel_flow(std::span<const double> flow);

// Strict filtering ---------------------------------------------------------------

struct StrictBounds {
    double speed_min = 0.0, speed_max = 250.0;
    double throttle_min = 0.0, throttle_max = 100.0;
    double torque_min = 0.0, torque_max = 1200.0;
    double temperature_min = -40.0, temperature_max = 60.0;
    double max_abs_accel = 10.0;
    double iqr_k = 3.0;
};

struct Fences {
    double lower = 0.0;
    double upper = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
};

/// [Q1 - k IQR, Q3 + k IQR] with type-7 quartiles over the finite values.
Fences iqr_fences(std::span<const double> values, double k);

/// Physical bounds, then |a| limit, then the global IQR rule over all trips
/// jointly (channels: speed, throttle, torque, temperatures, acceleration, CO2),
/// re-applied until no row lies outside the fences so the filter is idempotent.
/// Trips left empty are removed and listed in trips_dropped.
std::pair<std::vector<Trip>, FilterReport> strict_filter(std::vector<Trip> trips, const StrictBounds& bounds = {});
std::pair<Trip, FilterReport> strict_filter(Trip trip, const StrictBounds& bounds = {});

// Vehicle profiles ---------------------------------------------------------------

enum class VehicleKind : std::uint8_t { I3, Blazer, Pacifica, Qx50 };

/// Source column binding: canonical key plus accepted header spellings.
struct SourceColumn {
    std::string key;
    std::vector<std::string> headers;
};

struct VehicleProfile {
    std::string name;    ///< i3, blazer, pacifica, qx50, qx50-strict
    std::string vehicle; ///< harmonized vehicle tag (qx50-strict -> qx50)
    VehicleKind kind = VehicleKind::I3;
    Domain domain = Domain::EV;
    std::vector<SourceColumn> required_columns;
    std::vector<SourceColumn> optional_columns;
    /// At least one column of each group must be present in the header.
    std::vector<std::vector<SourceColumn>> required_any;
    /// Header holding the trip identifier; empty -> derived from the filename.
    std::string trip_id_column;
    /// Alternate trip-id column used when present (combined files).
    std::string combined_trip_column;
    std::size_t trip_id_fill_limit = 50;
    std::vector<std::string> corrupted_trip_ids;
    bool require_integer_trip_ids = false;
    bool numeric_trip_ids_from_filename = false;
    double wheel_radius = 0.0; ///< m, where torque derives from tractive force
    /// Fuel-flow channel keys in preference order.
    std::vector<std::string> fuel_preference;
    double co2_density = 1800.0; ///< g/m³ at 25 °C, 1 atm
    double co2_dilution = 1.0;   ///< fraction in (0, 1]
    double outlier_torque_limit = 0.0; ///< drop torque >= limit when > 0
    double outlier_co2_limit = 0.0;    ///< drop CO2 > limit when > 0
    bool strict = false;
    StrictBounds strict_bounds;

    /// Required source header names, in declaration order.
    std::vector<std::string> required_headers() const;
};

std::vector<std::string> profile_names();
/// Throws ConfigError for an unknown name.
VehicleProfile profile_by_name(std::string_view name);

/// "61706006 Test Data.txt" -> "61706006": strips the extension and the
/// "Test Data" suffix and keeps the numeric part when there is one.
std::string numeric_trip_id_from_filename(const std::filesystem::path& path);

struct IngestResult {
    std::vector<Trip> trips;
    FilterReport report;
};

/// Reads one file or every regular file of a directory (lexicographic order),
/// validates headers, filters, converts units, derives features and computes
/// CO2 targets. Files with incompatible headers are rejected and listed in the
/// report. Parsing runs in parallel; results merge in filename order.
IngestResult ingest(const std::filesystem::path& path, const VehicleProfile& profile,
                    const emissions::EmissionFactors& factors);

/// Parses one source table into a RawTable (header validation included).
/// Throws SchemaError naming the first missing column.
RawTable read_source_table(const std::filesystem::path& file, const VehicleProfile& profile);
/// Converts filtered raw rows into harmonized trips for the profile.
std::pair<std::vector<Trip>, FilterReport> harmonize(const RawTable& filtered, const VehicleProfile& profile,
                                                     const emissions::EmissionFactors& factors);
IntegrityRules integrity_rules_for(const VehicleProfile& profile, const RawTable& table);

} // namespace powertwin::ingest

#include "powertwin/error.hpp"
#include "powertwin/ingest.hpp"
#include "powertwin/table_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <set>
#include <unordered_map>

namespace powertwin::ingest {

namespace {

std::optional<std::size_t> find_header(const io::TextTable& table, const SourceColumn& column)
{
    for (const auto& h : column.headers) {
        if (auto idx = table.column(h)) {
            return idx;
        }
    }
    return std::nullopt;
}

std::vector<double> numeric_column(const io::TextTable& table, std::size_t index)
{
    std::vector<double> out(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        out[r] = index < row.size() ? io::parse_double(row[index]) : std::nan("");
    }
    return out;
}

std::vector<std::string> text_column(const io::TextTable& table, std::size_t index)
{
    std::vector<std::string> out(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        out[r] = index < row.size() ? row[index] : std::string{};
    }
    return out;
}

bool is_source_file(const std::filesystem::directory_entry& entry)
{
    if (!entry.is_regular_file()) {
        return false;
    }
    const std::string name = entry.path().filename().string();
    if (name.empty() || name.front() == '.') {
        return false;
    }
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".csv" || ext == ".txt" || ext == ".tsv";
}

} // namespace

RawTable read_source_table(const std::filesystem::path& file, const VehicleProfile& profile)
{
    const io::TextTable table = io::read_delimited(file);
    RawTable raw;
    raw.source = file.filename().string();
    raw.trip_ids.resize(table.rows.size());

    for (const auto& column : profile.required_columns) {
        const auto idx = find_header(table, column);
        if (!idx) {
            throw SchemaError("missing required column '" + column.headers.front() + "'");
        }
        if (column.key != "test_id") {
            raw.add_column(column.key, numeric_column(table, *idx));
        }
    }
    for (const auto& group : profile.required_any) {
        bool any = false;
        std::string names;
        for (const auto& column : group) {
            names += (names.empty() ? "" : " | ") + column.headers.front();
            if (const auto idx = find_header(table, column)) {
                raw.add_column(column.key, numeric_column(table, *idx));
                any = true;
            }
        }
        if (!any) {
            throw SchemaError("missing required column (one of: " + names + ")");
        }
    }
    for (const auto& column : profile.optional_columns) {
        if (const auto idx = find_header(table, column)) {
            raw.add_column(column.key, numeric_column(table, *idx));
        }
    }

    if (!profile.trip_id_column.empty()) {
        const auto idx = table.column(profile.trip_id_column);
        if (!idx) {
            throw SchemaError("missing required column '" + profile.trip_id_column + "'");
        }
        raw.trip_ids = text_column(table, *idx);
    } else if (const auto idx = profile.combined_trip_column.empty() ? std::nullopt
                                                                    : table.column(profile.combined_trip_column)) {
        raw.trip_ids = text_column(table, *idx);
    } else {
        const std::string id = profile.numeric_trip_ids_from_filename ? numeric_trip_id_from_filename(file)
                                                                      : file.stem().string();
        std::fill(raw.trip_ids.begin(), raw.trip_ids.end(), id);
    }
    return raw;
}

IntegrityRules integrity_rules_for(const VehicleProfile& profile, const RawTable& table)
{
    IntegrityRules rules;
    rules.trip_id_fill_limit = profile.trip_id_fill_limit;
    rules.corrupted_trip_ids = profile.corrupted_trip_ids;
    rules.require_integer_trip_ids = profile.require_integer_trip_ids;
    for (const auto& c : profile.required_columns) {
        if (c.key != "test_id") {
            rules.required_columns.push_back(c.key);
        }
    }
    for (const auto& group : profile.required_any) {
        auto& keys = rules.required_any.emplace_back();
        for (const auto& c : group) {
            if (table.has(c.key)) {
                keys.push_back(c.key);
            }
        }
    }
    for (const char* key : {"velocity_kmh", "speed_mph", "engine_torque", "tractive_force"}) {
        if (table.has(key)) {
            rules.non_negative_columns.emplace_back(key);
        }
    }
    return rules;
}

std::pair<std::vector<Trip>, FilterReport> harmonize(const RawTable& filtered, const VehicleProfile& profile,
                                                     const emissions::EmissionFactors& factors)
{
    FilterReport report;
    report.rows_in = filtered.rows();

    // Group rows by trip id in order of first appearance.
    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<std::size_t>> rows_of;
    for (std::size_t r = 0; r < filtered.rows(); ++r) {
        auto [it, inserted] = rows_of.try_emplace(filtered.trip_ids[r]);
        if (inserted) {
            order.push_back(filtered.trip_ids[r]);
        }
        it->second.push_back(r);
    }

    const auto value = [&](std::string_view key, std::size_t r) {
        return filtered.has(key) ? filtered.at(key)[r] : std::nan("");
    };

    std::vector<Trip> trips;
    for (const auto& id : order) {
        const auto& rows = rows_of.at(id);
        Trip trip{id, profile.domain, profile.vehicle, {}};
        trip.samples.resize(rows.size());

        std::vector<double> proxy_throttle;
        if (profile.kind == VehicleKind::Pacifica) {
            std::vector<double> flow(rows.size());
            for (std::size_t k = 0; k < rows.size(); ++k) {
                flow[k] = value("fuel_ccps", rows[k]);
            }
            proxy_throttle = throttle_proxy_from_fuel_flow(flow);
        }

        for (std::size_t k = 0; k < rows.size(); ++k) {
            const std::size_t r = rows[k];
            HarmonizedSample& s = trip.samples[k];
            s.time = value("time", r);
            s.ambient_temp = value("ambient", r);
            s.cabin_temp = value("cabin", r);
            if (const double hx = value("heat_exchanger", r); !std::isnan(hx)) {
                s.heat_exchanger_temp = hx;
            }
            if (profile.domain == Domain::EV) {
                s.velocity = value("velocity_kmh", r);
                s.throttle = value("throttle", r);
                s.motor_torque = value("torque", r);
                s.longitudinal_accel = value("accel", r);
                s.co2_rate = emissions::ev_rate({value("voltage", r), value("current", r)}, factors);
                continue;
            }
            s.velocity = convert_speed_mph_to_kmh(value("speed_mph", r));
            if (profile.kind == VehicleKind::Pacifica) {
                s.motor_torque = torque_from_tractive_force(value("tractive_force", r), profile.wheel_radius);
                s.throttle = proxy_throttle[k];
            } else {
                s.motor_torque = value("engine_torque", r);
                s.throttle = value("throttle", r);
            }
            const double co2_flow = value("co2_m3min", r);
            if (profile.kind == VehicleKind::Pacifica && std::isfinite(co2_flow)) {
                s.co2_rate = emissions::co2_volume_to_mass(co2_flow, profile.co2_density, profile.co2_dilution);
                continue;
            }
            double fuel_lph = std::nan("");
            for (const auto& key : profile.fuel_preference) {
                const double v = value(key, r);
                if (std::isnan(v)) {
                    continue;
                }
                if (key == "maf") {
                    fuel_lph = emissions::fuel_flow_from_maf(v, factors);
                } else if (key == "fuel_gps") {
                    fuel_lph = emissions::fuel_flow_from_mass(v, factors);
                } else {
                    fuel_lph = emissions::fuel_flow_from_ccps(v);
                }
                break;
            }
            s.co2_rate = emissions::icev_rate_from_fuel_flow(s.velocity, fuel_lph, factors);
        }

        if (profile.domain == Domain::ICEV) {
            trip = derive_acceleration(std::move(trip));
        }

        if (profile.outlier_torque_limit > 0.0 || profile.outlier_co2_limit > 0.0) {
            std::vector<HarmonizedSample> kept;
            kept.reserve(trip.samples.size());
            for (const auto& s : trip.samples) {
                const bool torque_out = profile.outlier_torque_limit > 0.0 && s.motor_torque >= profile.outlier_torque_limit;
                const bool co2_out = profile.outlier_co2_limit > 0.0 && s.co2_rate > profile.outlier_co2_limit;
                if (torque_out || co2_out) {
                    report.drop("outlier");
                } else {
                    kept.push_back(s);
                }
            }
            trip.samples = std::move(kept);
        }

        if (trip.samples.empty()) {
            report.trips_dropped.push_back(id);
            continue;
        }
        report.rows_out += trip.samples.size();
        trips.push_back(std::move(trip));
    }
    return {std::move(trips), std::move(report)};
}

IngestResult ingest(const std::filesystem::path& path, const VehicleProfile& profile,
                    const emissions::EmissionFactors& factors)
{
    factors.validate();
    std::vector<std::filesystem::path> files;
    if (std::filesystem::is_directory(path)) {
        for (const auto& entry : std::filesystem::directory_iterator(path)) {
            if (is_source_file(entry)) {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end(),
                  [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
    } else if (std::filesystem::is_regular_file(path)) {
        files.push_back(path);
    } else {
        throw IoError("input path does not exist: " + path.string());
    }

    struct FileResult {
        std::vector<Trip> trips;
        FilterReport report;
        std::optional<std::string> rejection;
    };
    std::vector<FileResult> results(files.size());

    const auto n = static_cast<std::ptrdiff_t>(files.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        auto& result = results[static_cast<std::size_t>(i)];
        const auto& file = files[static_cast<std::size_t>(i)];
        try {
            const RawTable raw = read_source_table(file, profile);
            auto [filtered, integrity] = integrity_filter(raw, integrity_rules_for(profile, raw));
            auto [trips, harmonized] = harmonize(filtered, profile, factors);
            integrity.chain(harmonized);
            result.trips = std::move(trips);
            result.report = std::move(integrity);
        } catch (const std::exception& e) {
            result.rejection = e.what();
        }
    }

    IngestResult out;
    std::set<std::string> used_ids;
    for (std::size_t i = 0; i < files.size(); ++i) {
        auto& result = results[i];
        if (result.rejection) {
            out.report.rejected_files.emplace_back(files[i].filename().string(), *result.rejection);
            continue;
        }
        out.report.merge(result.report);
        for (auto& trip : result.trips) {
            // Ids repeated across files stay distinct trips.
            std::string id = trip.trip_id;
            for (int k = 2; used_ids.contains(id); ++k) {
                id = trip.trip_id + "_" + std::to_string(k);
            }
            used_ids.insert(id);
            trip.trip_id = id;
            out.trips.push_back(std::move(trip));
        }
    }

    if (profile.strict) {
        auto [trips, strict] = strict_filter(std::move(out.trips), profile.strict_bounds);
        out.trips = std::move(trips);
        out.report.chain(strict);
    }
    return out;
}

} // namespace powertwin::ingest

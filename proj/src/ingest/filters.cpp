#include "powertwin/error.hpp"
#include "powertwin/ingest.hpp"
#include "powertwin/stats.hpp"
#include "powertwin/table_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

namespace powertwin::ingest {

void FilterReport::drop(std::string_view rule, std::size_t count)
{
    if (count == 0) {
        return;
    }
    dropped[std::string(rule)] += count;
}

std::size_t FilterReport::dropped_total() const
{
    std::size_t total = 0;
    for (const auto& [rule, n] : dropped) {
        total += n;
    }
    return total;
}

bool FilterReport::reconciles() const
{
    return rows_in == rows_out + dropped_total();
}

void FilterReport::chain(const FilterReport& later)
{
    rows_out = later.rows_out;
    for (const auto& [rule, n] : later.dropped) {
        dropped[rule] += n;
    }
    trips_dropped.insert(trips_dropped.end(), later.trips_dropped.begin(), later.trips_dropped.end());
    rejected_files.insert(rejected_files.end(), later.rejected_files.begin(), later.rejected_files.end());
}

void FilterReport::merge(const FilterReport& other)
{
    rows_in += other.rows_in;
    rows_out += other.rows_out;
    for (const auto& [rule, n] : other.dropped) {
        dropped[rule] += n;
    }
    trips_dropped.insert(trips_dropped.end(), other.trips_dropped.begin(), other.trips_dropped.end());
    rejected_files.insert(rejected_files.end(), other.rejected_files.begin(), other.rejected_files.end());
}

std::string format_filter_report(const FilterReport& report, const std::vector<std::string>& comments)
{
    std::string out;
    for (const auto& c : comments) {
        out += "# " + c + "\n";
    }
    out += "rows_in = " + std::to_string(report.rows_in) + "\n";
    out += "rows_out = " + std::to_string(report.rows_out) + "\n";
    for (const auto& [rule, n] : report.dropped) {
        out += "dropped." + rule + " = " + std::to_string(n) + "\n";
    }
    for (const auto& trip : report.trips_dropped) {
        out += "trip_dropped = " + trip + "\n";
    }
    for (const auto& [file, reason] : report.rejected_files) {
        out += "rejected_file = " + file + " : " + reason + "\n";
    }
    return out;
}

// RawTable ---------------------------------------------------------------------

bool RawTable::has(std::string_view column) const
{
    return std::find(columns.begin(), columns.end(), column) != columns.end();
}

const std::vector<double>& RawTable::at(std::string_view column) const
{
    const auto it = std::find(columns.begin(), columns.end(), column);
    if (it == columns.end()) {
        throw SchemaError(source + ": missing column '" + std::string(column) + "'");
    }
    return values[static_cast<std::size_t>(it - columns.begin())];
}

std::vector<double>& RawTable::at(std::string_view column)
{
    return const_cast<std::vector<double>&>(std::as_const(*this).at(column));
}

void RawTable::add_column(std::string name, std::vector<double> data)
{
    if (data.size() != rows()) {
        throw DimensionError(source + ": column '" + name + "' has " + std::to_string(data.size()) + " rows, table has " +
                             std::to_string(rows()));
    }
    columns.push_back(std::move(name));
    values.push_back(std::move(data));
}

RawTable RawTable::select_rows(std::span<const char> keep) const
{
    RawTable out;
    out.source = source;
    out.columns = columns;
    out.values.resize(values.size());
    for (std::size_t r = 0; r < rows(); ++r) {
        if (!keep[r]) {
            continue;
        }
        out.trip_ids.push_back(trip_ids[r]);
        for (std::size_t c = 0; c < values.size(); ++c) {
            out.values[c].push_back(values[c][r]);
        }
    }
    return out;
}

bool RawTable::operator==(const RawTable& other) const
{
    if (columns != other.columns || trip_ids != other.trip_ids || values.size() != other.values.size()) {
        return false;
    }
    for (std::size_t c = 0; c < values.size(); ++c) {
        const auto& a = values[c];
        const auto& b = other.values[c];
        if (a.size() != b.size()) {
            return false;
        }
        for (std::size_t r = 0; r < a.size(); ++r) {
            const bool both_nan = std::isnan(a[r]) && std::isnan(b[r]);
            if (!both_nan && a[r] != b[r]) {
                return false;
            }
        }
    }
    return true;
}

// Integrity filter ----------------------------------------------------------------

static bool is_integer_text(const std::string& id)
{
    const double v = io::parse_double(id);
    return std::isfinite(v) && v == std::floor(v);
}

std::pair<RawTable, FilterReport> integrity_filter(const RawTable& table, const IntegrityRules& rules)
{
    const std::size_t n = table.rows();
    FilterReport report;
    report.rows_in = n;

    std::vector<std::string> ids = table.trip_ids;
    {
        std::string last;
        std::size_t run = 0;
        for (auto& id : ids) {
            if (!id.empty()) {
                last = id;
                run = 0;
            } else if (!last.empty() && run < rules.trip_id_fill_limit) {
                id = last;
                ++run;
            } else {
                ++run;
            }
        }
    }

    const auto& time = table.at(rules.time_column);
    std::vector<const std::vector<double>*> required;
    for (const auto& c : rules.required_columns) {
        required.push_back(&table.at(c));
    }
    std::vector<std::vector<const std::vector<double>*>> any_groups;
    for (const auto& group : rules.required_any) {
        auto& g = any_groups.emplace_back();
        for (const auto& c : group) {
            if (table.has(c)) {
                g.push_back(&table.at(c));
            }
        }
    }
    std::vector<std::pair<std::string, const std::vector<double>*>> guarded;
    for (const auto& c : rules.non_negative_columns) {
        if (table.has(c)) {
            guarded.emplace_back("negative_" + c, &table.at(c));
        }
    }
    const std::set<std::string> corrupted(rules.corrupted_trip_ids.begin(), rules.corrupted_trip_ids.end());

    std::vector<char> keep(n, 0);
    std::unordered_map<std::string, double> last_time;
    std::set<std::string> corrupted_seen;
    for (std::size_t r = 0; r < n; ++r) {
        const std::string& id = ids[r];
        if (id.empty()) {
            report.drop("unresolved_trip_id");
            continue;
        }
        if (corrupted.contains(id) || (rules.require_integer_trip_ids && !is_integer_text(id))) {
            report.drop("corrupted_trip");
            corrupted_seen.insert(id);
            continue;
        }
        bool missing = std::isnan(time[r]);
        for (const auto* col : required) {
            missing = missing || std::isnan((*col)[r]);
        }
        for (const auto& group : any_groups) {
            const bool all_nan =
                std::all_of(group.begin(), group.end(), [r](const std::vector<double>* col) { return std::isnan((*col)[r]); });
            missing = missing || all_nan;
        }
        if (missing) {
            report.drop("missing_value");
            continue;
        }
        if (time[r] < 0.0) {
            report.drop("negative_time");
            continue;
        }
        bool negative = false;
        for (const auto& [rule, col] : guarded) {
            if ((*col)[r] < 0.0) {
                report.drop(rule);
                negative = true;
                break;
            }
        }
        if (negative) {
            continue;
        }
        auto [it, first] = last_time.try_emplace(id, time[r]);
        if (!first) {
            if (time[r] == it->second) {
                report.drop("duplicate_timestamp");
                continue;
            }
            if (time[r] < it->second) {
                report.drop("non_increasing_time");
                continue;
            }
            it->second = time[r];
        }
        keep[r] = 1;
    }

    RawTable filtered = table.select_rows(keep);
    {
        std::size_t k = 0;
        for (std::size_t r = 0; r < n; ++r) {
            if (keep[r]) {
                filtered.trip_ids[k++] = ids[r];
            }
        }
    }
    report.rows_out = filtered.rows();

    // Trips that had resolved rows on input but none on output.
    std::vector<std::string> order;
    std::set<std::string> seen;
    for (const auto& id : ids) {
        if (!id.empty() && seen.insert(id).second) {
            order.push_back(id);
        }
    }
    const std::set<std::string> survivors(filtered.trip_ids.begin(), filtered.trip_ids.end());
    for (const auto& id : order) {
        if (!survivors.contains(id)) {
            report.trips_dropped.push_back(id);
        }
    }

    if (filtered.rows() == 0) {
        throw EmptyTripError(table.source + ": every row was removed by the integrity filter");
    }
    return {std::move(filtered), std::move(report)};
}

// Strict filter ------------------------------------------------------------------

Fences iqr_fences(std::span<const double> values, double k)
{
    std::vector<double> finite;
    finite.reserve(values.size());
    for (double v : values) {
        if (std::isfinite(v)) {
            finite.push_back(v);
        }
    }
    std::sort(finite.begin(), finite.end());
    Fences f;
    f.q1 = stats::quantile_sorted(finite, 0.25);
    f.q3 = stats::quantile_sorted(finite, 0.75);
    const double iqr = f.q3 - f.q1;
    f.lower = f.q1 - k * iqr;
    f.upper = f.q3 + k * iqr;
    return f;
}

namespace {

constexpr std::array<Channel, 7> kIqrChannels{Channel::Velocity,  Channel::Throttle,         Channel::MotorTorque,
                                              Channel::AmbientTemp, Channel::CabinTemp, Channel::LongitudinalAccel,
                                              Channel::Co2Rate};

const char* bound_violation(const HarmonizedSample& s, const StrictBounds& b)
{
    if (!(s.velocity >= b.speed_min && s.velocity <= b.speed_max)) {
        return "bound_speed";
    }
    if (!(s.throttle >= b.throttle_min && s.throttle <= b.throttle_max)) {
        return "bound_throttle";
    }
    if (!(s.motor_torque >= b.torque_min && s.motor_torque <= b.torque_max)) {
        return "bound_torque";
    }
    if (!(s.co2_rate > 0.0)) {
        return "bound_co2";
    }
    for (double t : {s.ambient_temp, s.cabin_temp}) {
        if (!(t >= b.temperature_min && t <= b.temperature_max)) {
            return "bound_temperature";
        }
    }
    return nullptr;
}

} // namespace

std::pair<std::vector<Trip>, FilterReport> strict_filter(std::vector<Trip> trips, const StrictBounds& bounds)
{
    FilterReport report;
    for (const auto& t : trips) {
        report.rows_in += t.samples.size();
    }

    for (auto& trip : trips) {
        std::vector<HarmonizedSample> kept;
        kept.reserve(trip.samples.size());
        for (const auto& s : trip.samples) {
            if (const char* rule = bound_violation(s, bounds)) {
                report.drop(rule);
            } else if (std::abs(s.longitudinal_accel) > bounds.max_abs_accel) {
                report.drop("accel_limit");
            } else {
                kept.push_back(s);
            }
        }
        trip.samples = std::move(kept);
    }

    // Global IQR rule, repeated until stable.
    while (true) {
        std::size_t total = 0;
        for (const auto& t : trips) {
            total += t.samples.size();
        }
        if (total == 0) {
            break;
        }
        std::array<Fences, kIqrChannels.size()> fences{};
        std::vector<double> pooled;
        pooled.reserve(total);
        for (std::size_t c = 0; c < kIqrChannels.size(); ++c) {
            pooled.clear();
            for (const auto& t : trips) {
                for (const auto& s : t.samples) {
                    pooled.push_back(channel_value(s, kIqrChannels[c]));
                }
            }
            fences[c] = iqr_fences(pooled, bounds.iqr_k);
        }
        std::size_t removed = 0;
        for (auto& trip : trips) {
            std::vector<HarmonizedSample> kept;
            kept.reserve(trip.samples.size());
            for (const auto& s : trip.samples) {
                bool outlier = false;
                for (std::size_t c = 0; c < kIqrChannels.size(); ++c) {
                    const double v = channel_value(s, kIqrChannels[c]);
                    outlier = outlier || v < fences[c].lower || v > fences[c].upper;
                }
                if (outlier) {
                    ++removed;
                } else {
                    kept.push_back(s);
                }
            }
            trip.samples = std::move(kept);
        }
        report.drop("iqr_outlier", removed);
        if (removed == 0) {
            break;
        }
    }

    std::vector<Trip> survivors;
    for (auto& trip : trips) {
        if (trip.samples.empty()) {
            report.trips_dropped.push_back(trip.trip_id);
        } else {
            report.rows_out += trip.samples.size();
            survivors.push_back(std::move(trip));
        }
    }
    return {std::move(survivors), std::move(report)};
}

std::pair<Trip, FilterReport> strict_filter(Trip trip, const StrictBounds& bounds)
{
    const std::string id = trip.trip_id;
    auto [trips, report] = strict_filter(std::vector<Trip>{std::move(trip)}, bounds);
    if (trips.empty()) {
        throw EmptyTripError("trip '" + id + "': every row was removed by the strict filter");
    }
    return {std::move(trips.front()), std::move(report)};
}

} // namespace powertwin::ingest

#include "powertwin/dataset.hpp"

#include "powertwin/error.hpp"
#include "powertwin/rng.hpp"
#include "powertwin/table_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace powertwin::dataset {

double MinMaxScaler::transform(std::size_t index, double x) const
{
    const double span = max[index] - min[index];
    if (span == 0.0) {
        return 0.0;
    }
    return (x - min[index]) / span;
}

double MinMaxScaler::inverse(std::size_t index, double y) const
{
    return min[index] + y * (max[index] - min[index]);
}

MinMaxScaler scaler_fit(std::span<const Channel> channels, const std::vector<std::vector<double>>& columns)
{
    if (columns.size() != channels.size()) {
        throw DimensionError("scaler_fit: " + std::to_string(columns.size()) + " columns for " +
                             std::to_string(channels.size()) + " channels");
    }
    MinMaxScaler s;
    s.channels.assign(channels.begin(), channels.end());
    for (std::size_t c = 0; c < channels.size(); ++c) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (double x : columns[c]) {
            if (std::isfinite(x)) {
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
        }
        if (!(lo <= hi)) {
            throw InputError("scaler_fit: channel '" + std::string(channel_name(channels[c])) +
                             "' has no finite value");
        }
        s.min.push_back(lo);
        s.max.push_back(hi);
    }
    return s;
}

MinMaxScaler scaler_fit(const std::vector<Trip>& trips, std::span<const Channel> channels)
{
    std::vector<std::vector<double>> columns(channels.size());
    for (const auto& trip : trips) {
        for (const auto& sample : trip.samples) {
            for (std::size_t c = 0; c < channels.size(); ++c) {
                columns[c].push_back(channel_value(sample, channels[c]));
            }
        }
    }
    return scaler_fit(channels, columns);
}

namespace {

void check_width(const MinMaxScaler& scaler, std::span<const double> x)
{
    if (scaler.size() == 0 || x.size() % scaler.size() != 0) {
        throw DimensionError("scaler: " + std::to_string(x.size()) + " values do not form rows of " +
                             std::to_string(scaler.size()) + " channels");
    }
}

} // namespace

std::vector<double> scaler_transform(const MinMaxScaler& scaler, std::span<const double> x)
{
    check_width(scaler, x);
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = scaler.transform(i % scaler.size(), x[i]);
    }
    return out;
}

std::vector<double> scaler_inverse(const MinMaxScaler& scaler, std::span<const double> y)
{
    check_width(scaler, y);
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        out[i] = scaler.inverse(i % scaler.size(), y[i]);
    }
    return out;
}

void WindowSpec::validate() const
{
    if (length < 1 || stride < 1) {
        throw ConfigError("window length and stride must be >= 1");
    }
}

std::size_t window_count(std::size_t n, std::size_t length, std::size_t stride)
{
    if (length < 1 || stride < 1) {
        throw ConfigError("window length and stride must be >= 1");
    }
    if (n < length) {
        return 0;
    }
    return (n - length) / stride + 1;
}

std::vector<std::size_t> window_ends(std::size_t n, const WindowSpec& spec)
{
    const std::size_t count = window_count(n, spec.length, spec.stride);
    std::vector<std::size_t> ends(count);
    for (std::size_t i = 0; i < count; ++i) {
        ends[i] = i * spec.stride + spec.length - 1;
    }
    return ends;
}

WindowSet make_windows(const std::vector<Trip>& trips, const WindowSpec& spec, const MinMaxScaler& inputs,
                       const MinMaxScaler& targets)
{
    spec.validate();
    WindowSet set;
    const std::size_t in = inputs.size();
    const std::size_t out = targets.size();
    for (std::size_t t = 0; t < trips.size(); ++t) {
        const Trip& trip = trips[t];
        const auto ends = window_ends(trip.size(), spec);
        if (ends.empty()) {
            set.skipped.push_back({trip.trip_id, trip.size(),
                                   "trip has " + std::to_string(trip.size()) + " samples, window needs " +
                                       std::to_string(spec.length)});
            continue;
        }
        std::vector<double> scaled(trip.size() * in);
        for (std::size_t k = 0; k < trip.size(); ++k) {
            for (std::size_t c = 0; c < in; ++c) {
                scaled[k * in + c] = inputs.transform(c, channel_value(trip.samples[k], inputs.channels[c]));
            }
        }
        for (std::size_t end : ends) {
            const std::size_t begin = end + 1 - spec.length;
            set.data.inputs.insert(set.data.inputs.end(), scaled.begin() + static_cast<std::ptrdiff_t>(begin * in),
                                   scaled.begin() + static_cast<std::ptrdiff_t>((end + 1) * in));
            for (std::size_t c = 0; c < out; ++c) {
                set.data.targets.push_back(
                    targets.transform(c, channel_value(trip.samples[end], targets.channels[c])));
            }
            set.trip_of.push_back(t);
            set.sample_of.push_back(end);
            ++set.data.count;
        }
    }
    return set;
}

WindowSet make_windows(const Trip& trip, const WindowSpec& spec, const MinMaxScaler& inputs,
                       const MinMaxScaler& targets)
{
    return make_windows(std::vector<Trip>{trip}, spec, inputs, targets);
}

void SplitSpec::validate() const
{
    if (train < 0.0 || validation < 0.0 || test < 0.0 || std::fabs(train + validation + test - 1.0) > 1e-9) {
        throw ConfigError("split fractions must be non-negative and sum to 1");
    }
}

TripSplit split_by_trip(const std::vector<std::string>& trip_ids, const SplitSpec& spec)
{
    spec.validate();
    std::vector<std::string> ids = trip_ids;
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
        throw ConfigError("split_by_trip: duplicate trip id '" + *std::adjacent_find(ids.begin(), ids.end()) + "'");
    }
    const std::size_t n = ids.size();
    if (n < 3) {
        throw ConfigError("split_by_trip: need at least 3 trips, got " + std::to_string(n));
    }
    const auto n_train = static_cast<std::size_t>(std::floor(spec.train * static_cast<double>(n) + 1e-9));
    const auto n_val = static_cast<std::size_t>(std::floor(spec.validation * static_cast<double>(n) + 1e-9));
    if (n_train + n_val > n) {
        throw ConfigError("split_by_trip: fractions exceed the trip count");
    }
    const std::size_t n_test = n - n_train - n_val;
    if ((spec.train > 0.0 && n_train == 0) || (spec.validation > 0.0 && n_val == 0) ||
        (spec.test > 0.0 && n_test == 0)) {
        throw ConfigError("split_by_trip: " + std::to_string(n) + " trips are too few for the split fractions");
    }
    rng::Engine engine(rng::derive_seed(spec.seed, 2));
    rng::shuffle(ids, engine);
    TripSplit split;
    split.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.validation.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train),
                            ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
    split.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), ids.end());
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.validation.begin(), split.validation.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

TripSplit split_by_trip(const std::vector<Trip>& trips, const SplitSpec& spec)
{
    std::vector<std::string> ids;
    ids.reserve(trips.size());
    for (const auto& t : trips) {
        ids.push_back(t.trip_id);
    }
    return split_by_trip(ids, spec);
}

std::vector<Trip> select_trips(const std::vector<Trip>& all, const std::vector<std::string>& ids)
{
    std::vector<Trip> out;
    out.reserve(ids.size());
    for (const auto& id : ids) {
        const auto it = std::find_if(all.begin(), all.end(), [&](const Trip& t) { return t.trip_id == id; });
        if (it == all.end()) {
            throw ConfigError("unknown trip id '" + id + "'");
        }
        out.push_back(*it);
    }
    return out;
}

std::string format_manifest(const TripSplit& split, const std::vector<std::string>& comments)
{
    std::string text;
    for (const auto& c : comments) {
        text += "# " + c + "\n";
    }
    text += "trip_id,split\n";
    const auto emit = [&](const std::vector<std::string>& ids, const char* name) {
        for (const auto& id : ids) {
            text += id + "," + name + "\n";
        }
    };
    emit(split.train, "train");
    emit(split.validation, "validation");
    emit(split.test, "test");
    return text;
}

TripSplit parse_manifest(std::string_view text)
{
    const auto table = io::parse_delimited(text, ',');
    const auto id_col = table.column("trip_id");
    const auto split_col = table.column("split");
    if (!id_col || !split_col) {
        throw ConfigError("split manifest needs trip_id and split columns");
    }
    TripSplit split;
    for (const auto& row : table.rows) {
        if (row.size() <= std::max(*id_col, *split_col)) {
            throw ConfigError("split manifest: short row");
        }
        const std::string id = io::trim(row[*id_col]);
        const std::string which = io::trim(row[*split_col]);
        if (which == "train") {
            split.train.push_back(id);
        } else if (which == "validation" || which == "val") {
            split.validation.push_back(id);
        } else if (which == "test") {
            split.test.push_back(id);
        } else {
            throw ConfigError("split manifest: unknown split '" + which + "' for trip '" + id + "'");
        }
    }
    return split;
}

void write_manifest(const std::filesystem::path& path, const TripSplit& split, const std::vector<std::string>& comments)
{
    io::write_text_file(path, format_manifest(split, comments));
}

TripSplit read_manifest(const std::filesystem::path& path)
{
    return parse_manifest(io::read_text_file(path));
}

void check_manifest(const TripSplit& split, const std::vector<std::string>& trip_ids)
{
    std::multiset<std::string> named;
    for (const auto* part : {&split.train, &split.validation, &split.test}) {
        named.insert(part->begin(), part->end());
    }
    for (const auto& id : trip_ids) {
        const auto n = named.count(id);
        if (n != 1) {
            throw ConfigError("split manifest lists trip '" + id + "' " + std::to_string(n) + " times");
        }
    }
    const std::set<std::string> known(trip_ids.begin(), trip_ids.end());
    for (const auto& id : named) {
        if (!known.count(id)) {
            throw ConfigError("split manifest names unknown trip '" + id + "'");
        }
    }
}

} // namespace powertwin::dataset

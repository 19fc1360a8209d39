#pragma once

#include "powertwin/nn/train.hpp"
#include "powertwin/schema.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace powertwin::dataset {

/// Per-channel min-max scaling to [0, 1] fitted on training trips only.
/// Degenerate channels (max == min) transform to 0; values are not clamped.
struct MinMaxScaler {
    std::vector<Channel> channels;
    std::vector<double> min;
    std::vector<double> max;

    std::size_t size() const { return channels.size(); }
    double transform(std::size_t index, double x) const;
    double inverse(std::size_t index, double y) const;
    bool operator==(const MinMaxScaler&) const = default;
};

/// Pooled min and max over every sample of `trips`. Throws InputError when a
/// channel has no finite value.
MinMaxScaler scaler_fit(const std::vector<Trip>& trips, std::span<const Channel> channels);
/// Fit on raw per-channel columns (one vector per channel).
MinMaxScaler scaler_fit(std::span<const Channel> channels, const std::vector<std::vector<double>>& columns);

/// `x` holds one value per scaler channel (or a row-major matrix of such rows).
std::vector<double> scaler_transform(const MinMaxScaler& scaler, std::span<const double> x);
std::vector<double> scaler_inverse(const MinMaxScaler& scaler, std::span<const double> y);

struct WindowSpec {
    std::size_t length = 10;
    std::size_t stride = 1;

    void validate() const;
};

/// max(0, floor((n - L) / s) + 1).
std::size_t window_count(std::size_t n, std::size_t length, std::size_t stride);
/// Index of the final sample of every window of an n-sample trip.
std::vector<std::size_t> window_ends(std::size_t n, const WindowSpec& spec);

struct SkippedTrip {
    std::string trip_id;
    std::size_t samples = 0;
    std::string reason;
};

/// Windows of several trips, concatenated in trip order then window order.
struct WindowSet {
    nn::WindowData data;
    std::vector<std::size_t> trip_of;    ///< index into the input trips, per window
    std::vector<std::size_t> sample_of;  ///< final sample index, per window
    std::vector<SkippedTrip> skipped;
};

/// Scaled input windows over `inputs.channels` and scaled targets over
/// `targets.channels` at each window's final sample. Trips shorter than the
/// window are skipped and listed, not an error.
WindowSet make_windows(const std::vector<Trip>& trips, const WindowSpec& spec, const MinMaxScaler& inputs,
                       const MinMaxScaler& targets);
WindowSet make_windows(const Trip& trip, const WindowSpec& spec, const MinMaxScaler& inputs,
                       const MinMaxScaler& targets);

struct SplitSpec {
    double train = 0.70;
    double validation = 0.15;
    double test = 0.15;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TripSplit {
    std::vector<std::string> train;
    std::vector<std::string> validation;
    std::vector<std::string> test;

    bool operator==(const TripSplit&) const = default;
};

/// Seeded shuffle of the sorted trip ids, then floor(f * n) trips to train and
/// validation and the remainder to test. Throws ConfigError when fewer than 3
/// trips are given or a split with a positive fraction would be empty.
TripSplit split_by_trip(const std::vector<std::string>& trip_ids, const SplitSpec& spec);
TripSplit split_by_trip(const std::vector<Trip>& trips, const SplitSpec& spec);

/// Trips of `all` whose ids are in `ids`, in the order of `ids`.
/// Throws ConfigError on an unknown id.
std::vector<Trip> select_trips(const std::vector<Trip>& all, const std::vector<std::string>& ids);

/// `trip_id,split` lines with split one of train/validation/test.
std::string format_manifest(const TripSplit& split, const std::vector<std::string>& comments = {});
TripSplit parse_manifest(std::string_view text);
void write_manifest(const std::filesystem::path& path, const TripSplit& split,
                    const std::vector<std::string>& comments = {});
TripSplit read_manifest(const std::filesystem::path& path);
/// Throws ConfigError unless every id of `trip_ids` appears in exactly one split
/// and the manifest names no other trip.
void check_manifest(const TripSplit& split, const std::vector<std::string>& trip_ids);

} // namespace powertwin::dataset

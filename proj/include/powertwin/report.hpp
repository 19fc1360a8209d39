#pragma once

#include "powertwin/pipeline.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace powertwin::report {

struct AggregateStats {
    std::size_t count = 0;
    double mean = 0.0;
    double median = 0.0;
    double min = 0.0;
    double max = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double sample_std = 0.0;
    /// False for a single value, whose std is reported as 0.
    bool std_defined = true;
};

/// Type-7 quartiles and (n - 1) standard deviation. Throws InputError on an
/// empty or non-finite sample.
AggregateStats aggregate(std::span<const double> values);

struct Column {
    enum class Kind { Text, Number };
    std::string name;
    Kind kind = Kind::Number;
    int decimals = 3;
};

using TableSchema = std::vector<Column>;
using Cell = std::variant<std::string, double>;
using Row = std::vector<Cell>;

/// Header plus one line per row, comma separated; numbers in fixed notation
/// with the column's decimals. Throws SchemaError when a row's width or cell
/// kinds disagree with the schema.
std::string format_table(const std::vector<Row>& rows, const TableSchema& schema,
                         const std::vector<std::string>& comments = {});
void emit_table(const std::filesystem::path& path, const std::vector<Row>& rows, const TableSchema& schema,
                const std::vector<std::string>& comments = {});

struct Series {
    std::string name;
    std::vector<double> values;
};

/// Long format: one `x,series,value` row per point, series in the given order.
/// Throws DimensionError when a series length differs from `x`.
std::string format_plot_series(std::span<const double> x, const std::vector<Series>& series,
                               const std::vector<std::string>& comments = {}, const std::string& x_name = "time");
void emit_plot_series(const std::filesystem::path& path, std::span<const double> x, const std::vector<Series>& series,
                      const std::vector<std::string>& comments = {}, const std::string& x_name = "time");

/// `<stem>_<config hash>.csv`
std::string report_filename(const std::string& stem, const std::string& config_hash);

// Schemas and rows for the standard reports ----------------------------------------

/// trip, mae (g/s).
TableSchema mae_table_schema();
/// trip, direct, proxy, torque, throttle: the proxy-validation table.
TableSchema proxy_table_schema();
std::vector<Row> proxy_rows(const pipeline::ProxyReport& report);

/// metric, n, mean, median, min, max, q1, q3, std, std_defined.
TableSchema aggregate_schema();
Row aggregate_row(const std::string& metric, const AggregateStats& stats);
/// Aggregates of direct, proxy, delta (proxy - direct), torque and throttle MAE.
std::vector<Row> proxy_aggregate_rows(const pipeline::ProxyReport& report);

/// trip, ev_grams, icev_grams, gap_grams, samples.
TableSchema totals_schema();
Row totals_row(const pipeline::CounterfactualResult& result);

/// epoch, train_mse, val_mse (blank without validation).
TableSchema loss_curve_schema();
std::vector<Row> loss_curve_rows(const nn::LossHistory& history);

} // namespace powertwin::report

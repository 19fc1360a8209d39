#include "powertwin/report.hpp"

#include "powertwin/error.hpp"
#include "powertwin/stats.hpp"
#include "powertwin/table_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace powertwin::report {

AggregateStats aggregate(std::span<const double> values)
{
    if (values.empty()) {
        throw InputError("aggregate: empty sample");
    }
    std::vector<double> sorted(values.begin(), values.end());
    for (double v : sorted) {
        if (!std::isfinite(v)) {
            throw InputError("aggregate: non-finite value");
        }
    }
    std::sort(sorted.begin(), sorted.end());
    AggregateStats s;
    s.count = sorted.size();
    const double n = static_cast<double>(s.count);
    s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
    s.min = sorted.front();
    s.max = sorted.back();
    s.median = stats::quantile_sorted(sorted, 0.5);
    s.q1 = stats::quantile_sorted(sorted, 0.25);
    s.q3 = stats::quantile_sorted(sorted, 0.75);
    if (s.count < 2) {
        s.sample_std = 0.0;
        s.std_defined = false;
    } else {
        double ss = 0.0;
        for (double v : sorted) {
            ss += (v - s.mean) * (v - s.mean);
        }
        s.sample_std = std::sqrt(ss / (n - 1.0));
    }
    return s;
}

namespace {

std::string comment_block(const std::vector<std::string>& comments)
{
    std::string out;
    for (const auto& c : comments) {
        out += "# " + c + "\n";
    }
    return out;
}

} // namespace

std::string format_table(const std::vector<Row>& rows, const TableSchema& schema,
                         const std::vector<std::string>& comments)
{
    if (schema.empty()) {
        throw SchemaError("table schema has no columns");
    }
    std::string out = comment_block(comments);
    for (std::size_t c = 0; c < schema.size(); ++c) {
        out += (c > 0 ? "," : "") + schema[c].name;
    }
    out += '\n';
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const Row& row = rows[r];
        if (row.size() != schema.size()) {
            throw SchemaError("table row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                              " cells, schema has " + std::to_string(schema.size()));
        }
        for (std::size_t c = 0; c < schema.size(); ++c) {
            if (c > 0) {
                out += ',';
            }
            const Column& col = schema[c];
            if (col.kind == Column::Kind::Text) {
                const auto* text = std::get_if<std::string>(&row[c]);
                if (!text) {
                    throw SchemaError("table row " + std::to_string(r) + ": column '" + col.name + "' expects text");
                }
                if (text->find_first_of(",\n\r") != std::string::npos) {
                    throw SchemaError("table row " + std::to_string(r) + ": text '" + *text +
                                      "' contains a delimiter");
                }
                out += *text;
            } else {
                const auto* value = std::get_if<double>(&row[c]);
                if (!value) {
                    throw SchemaError("table row " + std::to_string(r) + ": column '" + col.name +
                                      "' expects a number");
                }
                out += std::isnan(*value) ? std::string() : io::format_fixed(*value, col.decimals);
            }
        }
        out += '\n';
    }
    return out;
}

void emit_table(const std::filesystem::path& path, const std::vector<Row>& rows, const TableSchema& schema,
                const std::vector<std::string>& comments)
{
    io::write_text_file(path, format_table(rows, schema, comments));
}

std::string format_plot_series(std::span<const double> x, const std::vector<Series>& series,
                               const std::vector<std::string>& comments, const std::string& x_name)
{
    for (const auto& s : series) {
        if (s.values.size() != x.size()) {
            throw DimensionError("plot series '" + s.name + "' has " + std::to_string(s.values.size()) +
                                 " values for " + std::to_string(x.size()) + " points");
        }
        if (s.name.find_first_of(",\n\r") != std::string::npos) {
            throw SchemaError("plot series name '" + s.name + "' contains a delimiter");
        }
    }
    std::string out = comment_block(comments);
    out += x_name + ",series,value\n";
    for (const auto& s : series) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            out += io::format_double(x[i]) + "," + s.name + "," + io::format_double(s.values[i]) + "\n";
        }
    }
    return out;
}

void emit_plot_series(const std::filesystem::path& path, std::span<const double> x, const std::vector<Series>& series,
                      const std::vector<std::string>& comments, const std::string& x_name)
{
    io::write_text_file(path, format_plot_series(x, series, comments, x_name));
}

std::string report_filename(const std::string& stem, const std::string& config_hash)
{
    return stem + "_" + config_hash + ".csv";
}

TableSchema mae_table_schema()
{
    return {{"trip", Column::Kind::Text, 0}, {"mae_g_per_s", Column::Kind::Number, 3}};
}

TableSchema proxy_table_schema()
{
    return {{"trip", Column::Kind::Text, 0},
            {"direct_mae_g_per_s", Column::Kind::Number, 4},
            {"proxy_mae_g_per_s", Column::Kind::Number, 4},
            {"torque_mae_nm", Column::Kind::Number, 3},
            {"throttle_mae_pct", Column::Kind::Number, 3}};
}

std::vector<Row> proxy_rows(const pipeline::ProxyReport& report)
{
    std::vector<Row> rows;
    for (const auto& r : report.rows) {
        rows.push_back({r.trip_id, r.direct_mae, r.proxy_mae, r.torque_mae, r.throttle_mae});
    }
    return rows;
}

TableSchema aggregate_schema()
{
    return {{"metric", Column::Kind::Text, 0},  {"n", Column::Kind::Number, 0},
            {"mean", Column::Kind::Number, 5},  {"median", Column::Kind::Number, 5},
            {"min", Column::Kind::Number, 5},   {"max", Column::Kind::Number, 5},
            {"q1", Column::Kind::Number, 5},    {"q3", Column::Kind::Number, 5},
            {"std", Column::Kind::Number, 5},   {"std_defined", Column::Kind::Number, 0}};
}

Row aggregate_row(const std::string& metric, const AggregateStats& s)
{
    return {metric, static_cast<double>(s.count), s.mean, s.median, s.min, s.max, s.q1, s.q3, s.sample_std,
            s.std_defined ? 1.0 : 0.0};
}

std::vector<Row> proxy_aggregate_rows(const pipeline::ProxyReport& report)
{
    std::vector<Row> rows;
    if (report.rows.empty()) {
        return rows;
    }
    rows.push_back(aggregate_row("direct_mae_g_per_s", aggregate(report.direct())));
    rows.push_back(aggregate_row("proxy_mae_g_per_s", aggregate(report.proxy())));
    rows.push_back(aggregate_row("delta_g_per_s", aggregate(report.deltas())));
    rows.push_back(aggregate_row("torque_mae_nm", aggregate(report.torque())));
    rows.push_back(aggregate_row("throttle_mae_pct", aggregate(report.throttle())));
    return rows;
}

TableSchema totals_schema()
{
    return {{"trip", Column::Kind::Text, 0},      {"ev_grams", Column::Kind::Number, 3},
            {"icev_grams", Column::Kind::Number, 3}, {"gap_grams", Column::Kind::Number, 3},
            {"samples", Column::Kind::Number, 0}};
}

Row totals_row(const pipeline::CounterfactualResult& result)
{
    return {result.trip_id, result.totals.ev_grams, result.totals.icev_grams, result.totals.gap_grams,
            static_cast<double>(result.time.size())};
}

TableSchema loss_curve_schema()
{
    return {{"epoch", Column::Kind::Number, 0},
            {"train_mse", Column::Kind::Number, 8},
            {"val_mse", Column::Kind::Number, 8}};
}

std::vector<Row> loss_curve_rows(const nn::LossHistory& history)
{
    std::vector<Row> rows;
    for (std::size_t e = 0; e < history.train.size(); ++e) {
        const double val =
            e < history.validation.size() ? history.validation[e] : std::numeric_limits<double>::quiet_NaN();
        rows.push_back({static_cast<double>(e + 1), history.train[e], val});
    }
    return rows;
}

} // namespace powertwin::report

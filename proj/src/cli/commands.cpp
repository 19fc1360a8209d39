#include "powertwin/cli.hpp"

#include "powertwin/checkpoint.hpp"
#include "powertwin/dataset.hpp"
#include "powertwin/error.hpp"
#include "powertwin/ingest.hpp"
#include "powertwin/pipeline.hpp"
#include "powertwin/report.hpp"
#include "powertwin/table_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <set>

namespace powertwin::cli {

namespace fs = std::filesystem;

namespace {

struct Context {
    config::RunConfig cfg;
    std::string hash;
    std::ostream& out;
    std::ostream& err;

    std::vector<std::string> comments() const
    {
        return {"config_hash = " + hash, "seed = " + std::to_string(cfg.seed()),
                "factors = phi " + cfg.get("phi") + " g/kWh, gasoline " + cfg.get("gasoline_factor") +
                    " g/L, ethanol " + cfg.get("ethanol_factor") + " g/L, ethanol_share " + cfg.get("ethanol_share") +
                    " %, afr " + cfg.get("afr") + ", fuel_density " + cfg.get("fuel_density") + " g/L"};
    }
    fs::path dir(const char* name) const { return cfg.run_dir() / name; }
};

std::string domain_key(Domain d)
{
    return d == Domain::EV ? "ev" : "icev";
}

std::string model_tag(Domain d, pipeline::Role role, const std::string& vehicle)
{
    std::string tag = domain_key(d) + "_" + std::string(pipeline::to_string(role));
    if (!vehicle.empty()) {
        tag += "_" + vehicle;
    }
    return tag;
}

std::string safe_name(const std::string& text)
{
    std::string out;
    for (unsigned char c : text) {
        out.push_back(std::isalnum(c) || c == '-' || c == '_' || c == '.' ? static_cast<char>(c) : '_');
    }
    return out;
}

fs::path harmonized_path(const Context& ctx, const std::string& vehicle)
{
    return ctx.dir("harmonized") / (vehicle + ".csv");
}

/// Distinct vehicles of the configured profiles, optionally restricted to one domain.
std::vector<ingest::VehicleProfile> configured_profiles(const config::RunConfig& cfg, std::optional<Domain> domain)
{
    std::vector<ingest::VehicleProfile> out;
    std::set<std::string> seen;
    for (const auto& name : cfg.get_list("vehicles")) {
        auto p = ingest::profile_by_name(name);
        if (domain && p.domain != *domain) {
            continue;
        }
        if (seen.insert(p.vehicle).second) {
            out.push_back(std::move(p));
        }
    }
    return out;
}

/// Harmonized trips of a domain. Ids are prefixed with "<vehicle>:" when
/// several vehicles are loaded together.
std::vector<Trip> load_domain_trips(const Context& ctx, Domain domain, const std::string& vehicle)
{
    std::vector<std::string> vehicles;
    if (!vehicle.empty()) {
        vehicles.push_back(vehicle);
    } else {
        for (const auto& p : configured_profiles(ctx.cfg, domain)) {
            vehicles.push_back(p.vehicle);
        }
    }
    std::vector<Trip> trips;
    std::size_t loaded = 0;
    for (const auto& v : vehicles) {
        const fs::path path = harmonized_path(ctx, v);
        if (!fs::exists(path)) {
            continue;
        }
        auto part = read_harmonized(path, domain, v);
        if (vehicles.size() > 1) {
            for (auto& t : part) {
                t.trip_id = v + ":" + t.trip_id;
            }
        }
        trips.insert(trips.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
        ++loaded;
    }
    if (loaded == 0) {
        throw InputError("no harmonized " + domain_key(domain) + " data under " + ctx.dir("harmonized").string() +
                         " (run `powertwin ingest` first)");
    }
    return trips;
}

std::vector<std::string> ids_of(const std::vector<Trip>& trips)
{
    std::vector<std::string> ids;
    for (const auto& t : trips) {
        ids.push_back(t.trip_id);
    }
    return ids;
}

dataset::TripSplit resolve_split(const Context& ctx, Domain domain, const std::vector<Trip>& trips)
{
    const std::string key = "split.manifest." + domain_key(domain);
    if (ctx.cfg.has(key)) {
        auto split = dataset::read_manifest(ctx.cfg.get(key));
        dataset::check_manifest(split, ids_of(trips));
        return split;
    }
    return dataset::split_by_trip(trips, ctx.cfg.split_spec());
}

fs::path checkpoint_path(const Context& ctx, Domain d, pipeline::Role role, const std::string& vehicle)
{
    return ctx.dir("checkpoints") / (model_tag(d, role, vehicle) + ".ckpt");
}

pipeline::SequenceModel require_checkpoint(const fs::path& path)
{
    if (!fs::exists(path)) {
        throw InputError("missing checkpoint " + path.string() + " (run `powertwin train` first)");
    }
    return checkpoint::load_checkpoint(path);
}

class RunLock {
public:
    explicit RunLock(const fs::path& dir) : path_(dir / ".lock")
    {
        fs::create_directories(dir);
        std::FILE* f = std::fopen(path_.c_str(), "wx");
        if (!f) {
            throw IoError("run directory is locked by " + path_.string() +
                          "; remove the file if no other run is active");
        }
        std::fclose(f);
    }
    ~RunLock()
    {
        std::error_code ec;
        fs::remove(path_, ec);
    }
    RunLock(const RunLock&) = delete;
    RunLock& operator=(const RunLock&) = delete;

private:
    fs::path path_;
};

std::string fmt(double v, int decimals = 4)
{
    return std::isfinite(v) ? io::format_fixed(v, decimals) : std::string("n/a");
}

// ingest ---------------------------------------------------------------------------

struct IngestArgs {
    std::vector<std::string> profiles;
    std::string raw;
};

int cmd_ingest(Context& ctx, const IngestArgs& args)
{
    std::vector<std::string> names = args.profiles.empty() ? ctx.cfg.get_list("vehicles") : args.profiles;
    if (names.empty()) {
        throw ConfigError("no vehicle profile selected (set `vehicles` or pass --profile)");
    }
    if (!args.raw.empty() && names.size() != 1) {
        throw ConfigError("--raw needs exactly one --profile");
    }
    const auto factors = ctx.cfg.factors();
    bool failed = false;
    for (const auto& name : names) {
        const auto profile = ingest::profile_by_name(name);
        const fs::path raw = args.raw.empty() ? fs::path(ctx.cfg.get("raw." + name)) : fs::path(args.raw);
        if (!fs::exists(raw)) {
            throw IoError("raw data path " + raw.string() + " for profile " + name + " does not exist");
        }
        const auto result = ingest::ingest(raw, profile, factors);
        auto comments = ctx.comments();
        comments.push_back("profile = " + name);
        fs::create_directories(ctx.dir("harmonized"));
        io::write_text_file(ctx.dir("harmonized") / (profile.vehicle + "_filter_report.txt"),
                            ingest::format_filter_report(result.report, comments));
        if (!result.trips.empty()) {
            write_harmonized(harmonized_path(ctx, profile.vehicle), result.trips, comments);
        }
        ctx.out << name << ": " << result.trips.size() << " trips, " << result.report.rows_out << " of "
                << result.report.rows_in << " rows kept\n";
        for (const auto& [rule, count] : result.report.dropped) {
            ctx.out << "  dropped " << rule << " = " << count << "\n";
        }
        for (const auto& [file, reason] : result.report.rejected_files) {
            ctx.err << "rejected " << file << ": " << reason << "\n";
            failed = true;
        }
        if (result.trips.empty()) {
            ctx.err << name << ": no trip survived ingest\n";
            failed = true;
        }
    }
    return failed ? kIngestFailed : kOk;
}

// train ----------------------------------------------------------------------------

struct TrainArgs {
    std::string domain = "ev";
    std::string role = "emissions";
    std::string vehicle;
};

int cmd_train(Context& ctx, const TrainArgs& args)
{
    const Domain domain = parse_domain(args.domain);
    const pipeline::Role role = pipeline::parse_role(args.role);
    if (domain == Domain::ICEV && role == pipeline::Role::Feature && !ctx.cfg.get_bool("icev.feature_model")) {
        throw ConfigError("the ICEV feature model is disabled; set icev.feature_model = true to train it");
    }
    const auto trips = load_domain_trips(ctx, domain, args.vehicle);
    const auto split = resolve_split(ctx, domain, trips);
    const auto train = dataset::select_trips(trips, split.train);
    const auto validation = dataset::select_trips(trips, split.validation);

    const auto model_cfg = ctx.cfg.model_config(domain, role, args.vehicle);
    const auto train_cfg = ctx.cfg.train_config(domain);
    const std::string tag = model_tag(domain, role, args.vehicle);

    RunLock lock(ctx.cfg.run_dir());
    const auto model =
        pipeline::train_sequence_model(role, domain, train, validation, model_cfg, train_cfg, args.vehicle);

    const std::string split_tag = domain_key(domain) + (args.vehicle.empty() ? "" : "_" + args.vehicle);
    fs::create_directories(ctx.dir("splits"));
    fs::create_directories(ctx.dir("checkpoints"));
    fs::create_directories(ctx.dir("loss_curves"));
    dataset::write_manifest(ctx.dir("splits") / (split_tag + ".csv"), split, ctx.comments());
    checkpoint::save_checkpoint(checkpoint_path(ctx, domain, role, args.vehicle), model,
                                {{"config_hash", ctx.hash}, {"seed", std::to_string(ctx.cfg.seed())}});
    report::emit_table(ctx.dir("loss_curves") / report::report_filename(tag, ctx.hash),
                       report::loss_curve_rows(model.history), report::loss_curve_schema(), ctx.comments());

    ctx.out << "trained " << tag << ": " << train.size() << " train / " << validation.size() << " validation / "
            << split.test.size() << " test trips, " << train_cfg.epochs << " epochs\n";
    if (!model.history.train.empty()) {
        ctx.out << "  final train mse = " << io::format_double(model.history.train.back()) << "\n";
    }
    const auto targets = pipeline::target_channels(role);
    for (std::size_t i = 0; i < model.validation_mae.size(); ++i) {
        ctx.out << "  validation mae " << channel_name(targets[i]) << " = " << fmt(model.validation_mae[i]) << "\n";
    }
    return kOk;
}

// validate -------------------------------------------------------------------------

struct ValidateArgs {
    std::string domain = "ev";
    std::string vehicle;
    bool replay = false;
};

int cmd_validate(Context& ctx, const ValidateArgs& args)
{
    const Domain domain = parse_domain(args.domain);
    const auto g = require_checkpoint(checkpoint_path(ctx, domain, pipeline::Role::Emissions, args.vehicle));
    std::optional<pipeline::SequenceModel> f_model;
    if (!args.replay) {
        f_model = require_checkpoint(checkpoint_path(ctx, domain, pipeline::Role::Feature, args.vehicle));
    }
    const auto trips = load_domain_trips(ctx, domain, args.vehicle);
    const auto split = resolve_split(ctx, domain, trips);
    const std::size_t min_len = 2 * g.window_len() - 1;
    std::vector<Trip> test;
    for (auto& t : dataset::select_trips(trips, split.test)) {
        if (t.size() < min_len) {
            ctx.err << "skipped trip " << t.trip_id << ": " << t.size() << " samples, proxy validation needs "
                    << min_len << "\n";
            continue;
        }
        test.push_back(std::move(t));
    }
    if (test.empty()) {
        throw InputError("no test trip long enough for proxy validation");
    }

    const int threads = ctx.cfg.threads();
    pipeline::ProxyReport rep;
    if (f_model) {
        rep = pipeline::proxy_validate(pipeline::ModelActuationPredictor(*f_model, threads), g, test, threads);
    } else {
        rep = pipeline::proxy_validate(pipeline::ReplayPredictor(g.window_len() - 1), g, test, threads);
    }

    auto comments = ctx.comments();
    comments.push_back(std::string("feature_model = ") + (f_model ? "checkpoint" : "replay"));
    const std::string stem = "proxy_" + domain_key(domain) + (args.vehicle.empty() ? "" : "_" + args.vehicle);
    fs::create_directories(ctx.dir("reports"));
    report::emit_table(ctx.dir("reports") / report::report_filename(stem, ctx.hash), report::proxy_rows(rep),
                       report::proxy_table_schema(), comments);
    report::emit_table(ctx.dir("reports") / report::report_filename(stem + "_aggregate", ctx.hash),
                       report::proxy_aggregate_rows(rep), report::aggregate_schema(), comments);

    ctx.out << report::format_table(report::proxy_rows(rep), report::proxy_table_schema());
    const auto direct = report::aggregate(rep.direct());
    const auto proxy = report::aggregate(rep.proxy());
    const auto delta = report::aggregate(rep.deltas());
    ctx.out << "median direct = " << fmt(direct.median) << ", proxy = " << fmt(proxy.median)
            << ", delta = " << fmt(delta.median) << " [" << fmt(delta.q1) << ", " << fmt(delta.q3) << "] g/s; "
            << rep.proxy_not_worse() << "/" << rep.rows.size() << " trips with proxy <= direct\n";
    return kOk;
}

// counterfact ------------------------------------------------------------------------

struct CounterfactArgs {
    std::vector<std::string> trips;
    bool all = false;
    std::string vehicle;
};

int cmd_counterfact(Context& ctx, const CounterfactArgs& args)
{
    if (args.trips.empty() && !args.all) {
        throw ConfigError("name ICEV trips with --trip or pass --all");
    }
    const auto f = require_checkpoint(checkpoint_path(ctx, Domain::EV, pipeline::Role::Feature, ""));
    const auto g = require_checkpoint(checkpoint_path(ctx, Domain::EV, pipeline::Role::Emissions, ""));
    const auto icev = load_domain_trips(ctx, Domain::ICEV, args.vehicle);

    std::vector<const Trip*> selected;
    if (args.all) {
        for (const auto& t : icev) {
            selected.push_back(&t);
        }
    }
    for (const auto& id : args.trips) {
        const auto it = std::find_if(icev.begin(), icev.end(), [&](const Trip& t) {
            const auto colon = t.trip_id.find(':');
            return t.trip_id == id || (colon != std::string::npos && t.trip_id.substr(colon + 1) == id);
        });
        if (it == icev.end()) {
            throw InputError("unknown ICEV trip '" + id + "'");
        }
        selected.push_back(&*it);
    }

    const int threads = ctx.cfg.threads();
    const pipeline::ModelActuationPredictor f_pred(f, threads);
    const std::size_t min_len = 2 * g.window_len() - 1;
    std::vector<report::Row> totals;
    fs::create_directories(ctx.dir("reports"));
    for (const Trip* trip : selected) {
        if (trip->size() < min_len) {
            const std::string reason = "trip " + trip->trip_id + " skipped: " + std::to_string(trip->size()) +
                                       " samples, the counterfactual needs " + std::to_string(min_len);
            if (!args.all) {
                throw InputError(reason);
            }
            ctx.err << reason << "\n";
            continue;
        }
        const auto result = pipeline::counterfactual(*trip, f_pred, g, threads);
        auto comments = ctx.comments();
        comments.push_back("trip = " + trip->trip_id);
        report::emit_plot_series(
            ctx.dir("reports") / report::report_filename("counterfactual_" + safe_name(trip->trip_id), ctx.hash),
            result.time,
            {{"ev_rate_g_per_s", result.ev_rate},
             {"icev_rate_g_per_s", result.icev_rate},
             {"gap_g_per_s", result.gap}},
            comments);
        totals.push_back(report::totals_row(result));
        ctx.out << trip->trip_id << ": EV " << fmt(result.totals.ev_grams, 3) << " g, ICEV "
                << fmt(result.totals.icev_grams, 3) << " g, gap " << fmt(result.totals.gap_grams, 3) << " g over "
                << result.time.size() << " samples\n";
    }
    if (totals.empty()) {
        throw InputError("no ICEV trip long enough for the counterfactual");
    }
    report::emit_table(ctx.dir("reports") / report::report_filename("counterfactual_totals", ctx.hash), totals,
                       report::totals_schema(), ctx.comments());
    return kOk;
}

// report ---------------------------------------------------------------------------

struct ReportArgs {
    std::string input;
    std::vector<std::string> columns;
};

int report_input(Context& ctx, const ReportArgs& args)
{
    const auto table = io::read_delimited(args.input);
    if (args.columns.empty()) {
        throw ConfigError("--input needs at least one --column");
    }
    std::vector<report::Row> rows;
    for (const auto& name : args.columns) {
        const auto col = table.column(name);
        if (!col) {
            throw SchemaError("column '" + name + "' not found in " + args.input);
        }
        std::vector<double> values;
        for (const auto& row : table.rows) {
            if (*col < row.size()) {
                const double v = io::parse_double(row[*col]);
                if (std::isfinite(v)) {
                    values.push_back(v);
                }
            }
        }
        rows.push_back(report::aggregate_row(name, report::aggregate(values)));
    }
    auto comments = ctx.comments();
    comments.push_back("input = " + fs::path(args.input).filename().string());
    fs::create_directories(ctx.dir("reports"));
    std::string input_stem = fs::path(args.input).stem().string();
    const std::string suffix = "_" + ctx.hash;
    if (input_stem.size() > suffix.size() && input_stem.ends_with(suffix)) {
        input_stem.erase(input_stem.size() - suffix.size());
    }
    const std::string stem = "aggregate_" + safe_name(input_stem);
    report::emit_table(ctx.dir("reports") / report::report_filename(stem, ctx.hash), rows, report::aggregate_schema(),
                       comments);
    ctx.out << report::format_table(rows, report::aggregate_schema());
    return kOk;
}

int cmd_report(Context& ctx, const ReportArgs& args)
{
    if (!args.input.empty()) {
        return report_input(ctx, args);
    }
    std::vector<fs::path> ckpts;
    if (fs::exists(ctx.dir("checkpoints"))) {
        for (const auto& e : fs::directory_iterator(ctx.dir("checkpoints"))) {
            if (e.is_regular_file() && e.path().extension() == ".ckpt") {
                ckpts.push_back(e.path());
            }
        }
    }
    std::sort(ckpts.begin(), ckpts.end());
    if (ckpts.empty()) {
        throw InputError("nothing to report: no checkpoints under " + ctx.dir("checkpoints").string());
    }
    const report::TableSchema schema = {
        {"model", report::Column::Kind::Text, 0},          {"domain", report::Column::Kind::Text, 0},
        {"role", report::Column::Kind::Text, 0},           {"vehicle", report::Column::Kind::Text, 0},
        {"epochs", report::Column::Kind::Number, 0},       {"final_train_mse", report::Column::Kind::Number, 8},
        {"final_val_mse", report::Column::Kind::Number, 8}, {"val_mae_1", report::Column::Kind::Number, 4},
        {"val_mae_2", report::Column::Kind::Number, 4}};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<report::Row> rows;
    fs::create_directories(ctx.dir("reports"));
    for (const auto& path : ckpts) {
        const auto m = checkpoint::load_checkpoint(path);
        const std::string name = path.stem().string();
        const auto& h = m.history;
        rows.push_back({name, std::string(domain_key(m.domain)), std::string(pipeline::to_string(m.role)),
                        m.vehicle.empty() ? std::string("-") : m.vehicle, static_cast<double>(h.train.size()),
                        h.train.empty() ? nan : h.train.back(), h.validation.empty() ? nan : h.validation.back(),
                        m.validation_mae.size() > 0 ? m.validation_mae[0] : nan,
                        m.validation_mae.size() > 1 ? m.validation_mae[1] : nan});
        std::vector<double> epochs;
        for (std::size_t e = 0; e < h.train.size(); ++e) {
            epochs.push_back(static_cast<double>(e + 1));
        }
        std::vector<report::Series> series{{"train_mse", h.train}};
        if (h.validation.size() == h.train.size() && !h.validation.empty()) {
            series.push_back({"val_mse", h.validation});
        }
        report::emit_plot_series(ctx.dir("reports") / report::report_filename("loss_plot_" + name, ctx.hash), epochs,
                                 series, ctx.comments(), "epoch");
    }
    report::emit_table(ctx.dir("reports") / report::report_filename("models", ctx.hash), rows, schema,
                       ctx.comments());
    ctx.out << report::format_table(rows, schema);

    const fs::path totals = ctx.dir("reports") / report::report_filename("counterfactual_totals", ctx.hash);
    if (fs::exists(totals)) {
        ReportArgs sub{totals.string(), {"ev_grams", "icev_grams", "gap_grams"}};
        return report_input(ctx, sub);
    }
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env)
{
    CLI::App app{"Counterfactual EV emissions for ICEV drive cycles", "powertwin"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_file;
    std::vector<std::string> overrides;
    app.add_option("-c,--config", config_file, "Run configuration file (key = value lines)");
    app.add_option("--set", overrides, "Override a config key: --set key=value (repeatable)");

    IngestArgs ingest_args;
    auto* ingest_cmd = app.add_subcommand("ingest", "Parse raw vehicle files into harmonized trips");
    ingest_cmd->add_option("-p,--profile", ingest_args.profiles, "Vehicle profile(s); default: config `vehicles`");
    ingest_cmd->add_option("--raw", ingest_args.raw, "Raw data directory or file for a single --profile");

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "Train a feature (f) or emissions (g) model for one domain");
    train_cmd->add_option("-d,--domain", train_args.domain, "ev or icev")->capture_default_str();
    train_cmd->add_option("-r,--role", train_args.role, "feature or emissions")->capture_default_str();
    train_cmd->add_option("--vehicle", train_args.vehicle, "Restrict to one vehicle's harmonized data");

    ValidateArgs validate_args;
    auto* validate_cmd = app.add_subcommand("validate", "Proxy validation: g on measured vs predicted actuation");
    validate_cmd->add_option("-d,--domain", validate_args.domain, "ev or icev")->capture_default_str();
    validate_cmd->add_option("--vehicle", validate_args.vehicle, "Vehicle tag of the checkpoints");
    validate_cmd->add_flag("--replay", validate_args.replay, "Replay measured actuation instead of the feature model");

    CounterfactArgs cf_args;
    auto* cf_cmd = app.add_subcommand("counterfact", "Counterfactual EV emissions for ICEV trips");
    cf_cmd->add_option("-t,--trip", cf_args.trips, "ICEV trip id (repeatable)");
    cf_cmd->add_flag("--all", cf_args.all, "Every harmonized ICEV trip");
    cf_cmd->add_option("--vehicle", cf_args.vehicle, "Restrict to one ICEV vehicle");

    ReportArgs report_args;
    auto* report_cmd = app.add_subcommand("report", "Summaries, loss-curve plot data and aggregates");
    report_cmd->add_option("--input", report_args.input, "Aggregate columns of this table instead");
    report_cmd->add_option("--column", report_args.columns, "Column of --input to aggregate (repeatable)");

    std::vector<std::string> argv_store{"powertwin"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) {
        argv.push_back(a.data());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    struct Command {
        CLI::App* app;
        int failure;
    };
    const std::vector<Command> commands = {{ingest_cmd, kIngestFailed},
                                           {train_cmd, kTrainFailed},
                                           {validate_cmd, kValidateFailed},
                                           {cf_cmd, kCounterfactFailed},
                                           {report_cmd, kUsage}};
    for (const auto& c : commands) {
        if (!c.app->parsed()) {
            continue;
        }
        try {
            std::optional<fs::path> file;
            if (!config_file.empty()) {
                file = config_file;
            }
            Context ctx{config::load(file, env, overrides), {}, out, err};
            ctx.hash = ctx.cfg.hash();
            if (c.app == ingest_cmd) {
                return cmd_ingest(ctx, ingest_args);
            }
            if (c.app == train_cmd) {
                return cmd_train(ctx, train_args);
            }
            if (c.app == validate_cmd) {
                return cmd_validate(ctx, validate_args);
            }
            if (c.app == cf_cmd) {
                return cmd_counterfact(ctx, cf_args);
            }
            return cmd_report(ctx, report_args);
        } catch (const std::exception& e) {
            err << "powertwin " << c.app->get_name() << ": " << e.what() << "\n";
            return c.failure;
        }
    }
    return kUsage;
}

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace powertwin::cli

#include "doctest.h"

#include "powertwin/checkpoint.hpp"
#include "powertwin/cli.hpp"
#include "powertwin/synth.hpp"
#include "powertwin/table_io.hpp"

#include <filesystem>
#include <map>
#include <sstream>

using namespace powertwin;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

// A small synthetic dataset on disk plus a config file whose models train in well under a second.
struct Workspace {
    fs::path root;
    fs::path conf;

    explicit Workspace(const std::string& name)
    {
        root = fs::temp_directory_path() / ("powertwin_cli_" + name);
        fs::remove_all(root);
        synth::WorldSpec spec;
        spec.seed = 1;
        spec.ev_trips = 10;
        spec.icev_trips = 7;
        spec.samples_per_trip = 40;
        const auto world = synth::make_world(spec);
        const emissions::EmissionFactors factors;
        synth::write_i3_raw(root / "raw" / "i3", world.ev_trips, factors);
        synth::write_qx50_raw(root / "raw" / "qx50", world.icev_trips, factors);

        spec.ev_trips = 0;
        spec.icev_trips = 1;
        spec.samples_per_trip = 15;
        auto short_world = synth::make_world(spec);
        short_world.icev_trips[0].trip_id = "7999";
        synth::write_qx50_raw(root / "raw" / "qx50", short_world.icev_trips, factors);

        conf = root / "powertwin.conf";
        io::write_text_file(conf, "run_dir = " + (root / "run").string() +
                                      "\n"
                                      "vehicles = i3, qx50\n"
                                      "raw.i3 = " + (root / "raw" / "i3").string() +
                                      "\n"
                                      "raw.qx50 = " + (root / "raw" / "qx50").string() +
                                      "\n"
                                      "ev.hidden_units = 4\nev.head_units = 4\nev.epochs = 2\nev.batch_size = 32\n"
                                      "icev.hidden_units = 4\nicev.head_units = 4\nicev.lstm_layers = 1\n"
                                      "icev.epochs = 1\nicev.batch_size = 32\n");
    }
    ~Workspace() { fs::remove_all(root); }

    Outcome run(std::vector<std::string> args) const
    {
        args.insert(args.begin(), {"--config", conf.string()});
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(args, out, err, {});
        return {code, out.str(), err.str()};
    }

    fs::path run_dir() const { return root / "run"; }

    std::map<std::string, std::string> snapshot() const
    {
        std::map<std::string, std::string> files;
        for (const auto& e : fs::recursive_directory_iterator(run_dir())) {
            if (e.is_regular_file()) {
                files[fs::relative(e.path(), run_dir()).string()] = io::read_text_file(e.path());
            }
        }
        return files;
    }
};

std::optional<fs::path> find_file(const fs::path& dir, const std::string& prefix)
{
    if (!fs::exists(dir)) {
        return std::nullopt;
    }
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().filename().string().rfind(prefix, 0) == 0) {
            return e.path();
        }
    }
    return std::nullopt;
}

void full_run(const Workspace& ws)
{
    REQUIRE(ws.run({"ingest"}).code == cli::kOk);
    REQUIRE(ws.run({"train", "--domain", "ev", "--role", "emissions"}).code == cli::kOk);
    REQUIRE(ws.run({"train", "--domain", "ev", "--role", "feature"}).code == cli::kOk);
    REQUIRE(ws.run({"validate", "--domain", "ev"}).code == cli::kOk);
    REQUIRE(ws.run({"counterfact", "--trip", "7000"}).code == cli::kOk);
    REQUIRE(ws.run({"report"}).code == cli::kOk);
}

} // namespace

TEST_CASE("usage errors exit 1")
{
    std::ostringstream out;
    std::ostringstream err;
    CHECK(cli::run({}, out, err, {}) == cli::kUsage);
    CHECK(cli::run({"frobnicate"}, out, err, {}) == cli::kUsage);
    CHECK(cli::run({"--help"}, out, err, {}) == cli::kOk);
    CHECK(cli::run({"--set", "no_such_key=1", "report"}, out, err, {}) == cli::kUsage);
}

TEST_CASE("end-to-end commands and exit codes")
{
    const Workspace ws("e2e");

    const auto ingested = ws.run({"ingest"});
    CHECK(ingested.code == cli::kOk);
    CHECK(fs::exists(ws.run_dir() / "harmonized" / "i3.csv"));
    CHECK(fs::exists(ws.run_dir() / "harmonized" / "qx50_filter_report.txt"));
    const std::string harmonized = io::read_text_file(ws.run_dir() / "harmonized" / "i3.csv");
    CHECK(harmonized.find("# config_hash = ") == 0);
    CHECK(harmonized.find("# factors = phi 38.5 g/kWh") != std::string::npos);

    SUBCASE("train")
    {
        CHECK(ws.run({"train", "--domain", "ev", "--role", "emissions"}).code == cli::kOk);
        auto g = checkpoint::load_checkpoint(ws.run_dir() / "checkpoints" / "ev_emissions.ckpt");
        CHECK(g.network.config().output_dim == 1);
        CHECK(ws.run({"train", "--domain", "ev", "--role", "feature"}).code == cli::kOk);
        auto f = checkpoint::load_checkpoint(ws.run_dir() / "checkpoints" / "ev_feature.ckpt");
        CHECK(f.network.config().output_dim == 2);
        CHECK(fs::exists(ws.run_dir() / "splits" / "ev.csv"));
        CHECK(find_file(ws.run_dir() / "loss_curves", "ev_emissions_"));
        CHECK_FALSE(fs::exists(ws.run_dir() / ".lock"));

        CHECK(ws.run({"train", "--domain", "icev", "--role", "emissions", "--vehicle", "qx50"}).code == cli::kOk);
        auto icev = checkpoint::load_checkpoint(ws.run_dir() / "checkpoints" / "icev_emissions_qx50.ckpt");
        CHECK(icev.history.train.size() == 1);
        CHECK(icev.network.config().hidden_units == 4);

        CHECK(ws.run({"train", "--domain", "icev", "--role", "feature"}).code == cli::kTrainFailed);
        CHECK(ws.run({"--set", "icev.feature_model=true", "train", "--domain", "icev", "--role", "feature"}).code ==
              cli::kOk);
        CHECK(ws.run({"--set", "ev.base_lr=1e308", "--set", "ev.epochs=3", "train"}).code == cli::kTrainFailed);
    }
    SUBCASE("validate and counterfact")
    {
        CHECK(ws.run({"validate"}).code == cli::kValidateFailed);
        REQUIRE(ws.run({"train", "--domain", "ev", "--role", "emissions"}).code == cli::kOk);
        REQUIRE(ws.run({"validate", "--replay"}).code == cli::kOk);
        const auto proxy_file = find_file(ws.run_dir() / "reports", "proxy_ev_");
        REQUIRE(proxy_file);
        const auto table = io::read_delimited(*proxy_file);
        CHECK(table.rows.size() == 2);
        for (const auto& row : table.rows) {
            CHECK(row[1] == row[2]);
        }
        CHECK(find_file(ws.run_dir() / "reports", "proxy_ev_aggregate_"));

        CHECK(ws.run({"counterfact", "--trip", "7000"}).code == cli::kCounterfactFailed);
        REQUIRE(ws.run({"train", "--domain", "ev", "--role", "feature"}).code == cli::kOk);
        const auto validated = ws.run({"validate"});
        CHECK(validated.code == cli::kOk);
        CHECK(validated.out.find("median direct = ") != std::string::npos);

        const auto cf = ws.run({"counterfact", "--trip", "7000"});
        CHECK(cf.code == cli::kOk);
        const auto series = find_file(ws.run_dir() / "reports", "counterfactual_7000_");
        REQUIRE(series);
        const auto plot = io::read_delimited(*series);
        CHECK(plot.rows.size() > 0);
        CHECK(plot.rows.size() % 3 == 0);
        CHECK(plot.rows.size() <= 3 * (40 - 18));
        const auto totals = find_file(ws.run_dir() / "reports", "counterfactual_totals_");
        REQUIRE(totals);
        CHECK(io::read_delimited(*totals).header ==
              std::vector<std::string>{"trip", "ev_grams", "icev_grams", "gap_grams", "samples"});

        const auto unknown = ws.run({"counterfact", "--trip", "123"});
        CHECK(unknown.code == cli::kCounterfactFailed);
        const auto short_trip = ws.run({"counterfact", "--trip", "7999"});
        CHECK(short_trip.code == cli::kCounterfactFailed);
        CHECK(short_trip.err.find("skipped") != std::string::npos);
        const auto all = ws.run({"counterfact", "--all"});
        CHECK(all.code == cli::kOk);
        CHECK(all.err.find("7999") != std::string::npos);

        const auto rep = ws.run({"report"});
        CHECK(rep.code == cli::kOk);
        CHECK(find_file(ws.run_dir() / "reports", "models_"));
        CHECK(find_file(ws.run_dir() / "reports", "loss_plot_ev_feature_"));
        const auto agg = find_file(ws.run_dir() / "reports", "aggregate_counterfactual_totals_");
        REQUIRE(agg);
        CHECK(agg->filename().string().size() == std::string("aggregate_counterfactual_totals_.csv").size() + 16);
    }
}

TEST_CASE("ingest rejects files with unknown headers")
{
    const Workspace ws("reject");
    const fs::path bad = ws.root / "raw" / "bad";
    fs::create_directories(bad);
    fs::copy_file(ws.root / "raw" / "i3" / "ev1000.csv", bad / "ev1000.csv");
    io::write_text_file(bad / "zz.csv", "Timestamp;Speed\n0;1\n");
    const auto r = ws.run({"ingest", "--profile", "i3", "--raw", bad.string()});
    CHECK(r.code == cli::kIngestFailed);
    CHECK(r.err.find("zz.csv") != std::string::npos);
    const std::string report = io::read_text_file(ws.run_dir() / "harmonized" / "i3_filter_report.txt");
    CHECK(report.find("rejected_file = zz.csv") != std::string::npos);

    CHECK(ws.run({"ingest", "--profile", "i3", "--raw", (ws.root / "missing").string()}).code ==
          cli::kIngestFailed);
    CHECK(ws.run({"ingest", "--profile", "qx50-strict"}).code == cli::kIngestFailed);
}

TEST_CASE("identical single-threaded runs produce identical files")
{
    const Workspace ws("determinism");
    full_run(ws);
    const auto first = ws.snapshot();
    CHECK(first.size() > 10);
    fs::remove_all(ws.run_dir());
    full_run(ws);
    const auto second = ws.snapshot();
    CHECK(first == second);
}

#include "doctest.h"

#include "powertwin/config.hpp"
#include "powertwin/error.hpp"
#include "powertwin/table_io.hpp"

#include <filesystem>

using namespace powertwin;
using namespace powertwin::config;

TEST_CASE("defaults")
{
    const RunConfig c;
    CHECK(c.seed() == 0);
    CHECK(c.threads() == 1);
    CHECK(c.factors().phi == 38.5);
    CHECK(c.factors().gasoline == 2310.0);
    CHECK(c.factors().ethanol == 1510.0);
    CHECK(c.factors().afr == 14.7);
    CHECK(c.split_spec().train == doctest::Approx(0.70));
    const auto ev = c.model_config(Domain::EV, pipeline::Role::Emissions);
    CHECK(ev.hidden_units == 32);
    CHECK(ev.lstm_layers == 1);
    CHECK(ev.input_dim == 3);
    CHECK(ev.output_dim == 1);
    const auto icev = c.model_config(Domain::ICEV, pipeline::Role::Feature);
    CHECK(icev.hidden_units == 64);
    CHECK(icev.lstm_layers == 2);
    CHECK(icev.output_dim == 2);
    CHECK(c.train_config(Domain::EV).epochs == 20);
    CHECK(c.train_config(Domain::ICEV).epochs == 50);
    CHECK_FALSE(c.train_config(Domain::EV).warmup_steps.has_value());
    CHECK_FALSE(c.get_bool("icev.feature_model"));
    CHECK(c.get_list("vehicles") == std::vector<std::string>{"i3"});
}

TEST_CASE("model seeds derive from the top-level seed")
{
    RunConfig a;
    const auto s1 = a.model_config(Domain::EV, pipeline::Role::Emissions).seed;
    CHECK(s1 != a.model_config(Domain::EV, pipeline::Role::Feature).seed);
    CHECK(s1 != a.model_config(Domain::EV, pipeline::Role::Emissions, "i3").seed);
    a.set("seed", "1");
    CHECK(s1 != a.model_config(Domain::EV, pipeline::Role::Emissions).seed);
}

TEST_CASE("precedence: defaults < file < environment < overrides")
{
    const auto path = std::filesystem::temp_directory_path() / "powertwin_test.conf";
    io::write_text_file(path, "# run\nseed = 5\nphi = 100\nev.epochs = 7\nthreads = 2\n");
    const std::vector<std::pair<std::string, std::string>> env{{"POWERTWIN_PHI", "200"}, {"POWERTWIN_EV__EPOCHS", "9"}, {"OTHER", "x"}};
    const auto c = load(path, env, {"ev.epochs=11"});
    CHECK(c.seed() == 5);
    CHECK(c.threads() == 2);
    CHECK(c.factors().phi == 200.0);
    CHECK(c.train_config(Domain::EV).epochs == 11);
    CHECK(load(path, {}, {}).factors().phi == 100.0);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(load(std::filesystem::path("/nonexistent/powertwin.conf"), {}, {}), ConfigError);
}

TEST_CASE("invalid values and keys")
{
    RunConfig c;
    CHECK_THROWS_AS(c.set("no_such_key", "1"), ConfigError);
    CHECK_NOTHROW(c.set("raw.i3", "/data/i3"));
    CHECK_THROWS_AS(c.set("raw.tesla", "/data"), ConfigError);
    CHECK_THROWS_AS(apply_text(c, "seed 5\n"), ConfigError);
    CHECK_THROWS_AS(apply_overrides(c, {"seed"}), ConfigError);
    c.set("seed", "-1");
    CHECK_THROWS_AS(c.seed(), ConfigError);
    c.set("seed", "0");
    c.set("phi", "abc");
    CHECK_THROWS_AS(c.factors(), ConfigError);
    c.set("phi", "-1");
    CHECK_THROWS_AS(c.factors(), ConfigError);
    c.set("phi", "38.5");
    c.set("threads", "0");
    CHECK_THROWS_AS(c.threads(), ConfigError);
    c.set("threads", "1");
    c.set("ev.warmup_steps", "3");
    CHECK(c.train_config(Domain::EV).warmup_steps == 3u);
    c.set("icev.feature_model", "maybe");
    CHECK_THROWS_AS(c.get_bool("icev.feature_model"), ConfigError);
}

TEST_CASE("hash tracks every value")
{
    RunConfig a;
    RunConfig b;
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 16);
    b.set("phi", "38.6");
    CHECK(a.hash() != b.hash());
    b.set("phi", "38.5");
    CHECK(a.hash() == b.hash());
    CHECK(a.canonical().find("phi = 38.5\n") != std::string::npos);
}

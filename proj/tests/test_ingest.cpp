#include "doctest.h"
#include "oracles.hpp"

#include "powertwin/error.hpp"
#include "powertwin/ingest.hpp"
#include "powertwin/synth.hpp"
#include "powertwin/table_io.hpp"

#include <cmath>
#include <filesystem>
#include <random>

using namespace powertwin;
using namespace powertwin::ingest;

namespace {

const double kNaN = std::nan("");

RawTable make_table(std::vector<std::string> ids, std::vector<double> time)
{
    RawTable t;
    t.source = "test";
    t.trip_ids = std::move(ids);
    t.add_column("time", std::move(time));
    return t;
}

std::filesystem::path fresh_dir(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("powertwin_ingest_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

HarmonizedSample plain_sample(double t)
{
    HarmonizedSample s;
    s.time = t;
    s.velocity = 50.0;
    s.throttle = 10.0;
    s.motor_torque = 100.0;
    s.ambient_temp = 20.0;
    s.cabin_temp = 20.0;
    s.longitudinal_accel = 0.0;
    s.co2_rate = 1.0;
    return s;
}

} // namespace

TEST_CASE("speed conversion")
{
    CHECK(convert_speed_mph_to_kmh(60.0) == doctest::Approx(96.56064).epsilon(1e-12));
    CHECK(convert_speed_mph_to_kmh(0.0) == 0.0);
    CHECK(std::abs(convert_speed_mph_to_kmh(37.28227153) - 60.0) <= 1e-6);
}

TEST_CASE("wheel speed and tractive torque")
{
    CHECK(derive_wheel_rpm(100.0) == doctest::Approx(715.0));
    CHECK(derive_wheel_rpm(0.0) == 0.0);
    CHECK(derive_wheel_rpm(50.0) == doctest::Approx(357.5));
    CHECK(torque_from_tractive_force(1000.0, 0.3) == doctest::Approx(300.0));
    CHECK(torque_from_tractive_force(0.0, 0.3) == 0.0);
    CHECK(torque_from_tractive_force(500.0, 0.371) == doctest::Approx(185.5));
    CHECK_THROWS_AS(torque_from_tractive_force(1.0, 0.0), InputError);

    // Radius implied by 7.150 rpm per km/h, found by bisection on rpm(R).
    double lo = 0.1;
    double hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double rpm = (1000.0 / 60.0) / (2.0 * 3.14159265358979323846 * mid);
        (rpm > kWheelRpmPerKmh ? lo : hi) = mid;
    }
    CHECK(wheel_radius_from_rpm_factor(kWheelRpmPerKmh) == doctest::Approx(lo).epsilon(1e-9));
    CHECK(wheel_radius_from_rpm_factor(kWheelRpmPerKmh) == doctest::Approx(0.3710).epsilon(1e-3));
}

TEST_CASE("finite-difference acceleration")
{
    const auto a = derive_acceleration(std::vector<double>{0, 1, 2}, std::vector<double>{0, 10, 20});
    REQUIRE(a.size() == 3);
    CHECK(a[0] == 0.0);
    CHECK(a[1] == doctest::Approx(2.77778).epsilon(1e-5));
    CHECK(a[2] == doctest::Approx(2.77778).epsilon(1e-5));

    const auto flat = derive_acceleration(std::vector<double>{0, 0.5, 1.7}, std::vector<double>{30, 30, 30});
    CHECK(flat == std::vector<double>{0, 0, 0});
    CHECK(derive_acceleration(std::vector<double>{4}, std::vector<double>{9}) == std::vector<double>{0});
    CHECK_THROWS(derive_acceleration(std::vector<double>{0, 0}, std::vector<double>{1, 2}));
}

TEST_CASE("throttle proxy from fuel flow")
{
    CHECK(throttle_proxy_from_fuel_flow(std::vector<double>{1, 2, 3}) == std::vector<double>{0, 50, 100});
    CHECK(throttle_proxy_from_fuel_flow(std::vector<double>{5, 5, 5}) == std::vector<double>{0, 0, 0});
    CHECK(throttle_proxy_from_fuel_flow(std::vector<double>{0, 1, 4}) == std::vector<double>{0, 25, 100});
}

TEST_CASE("integrity filter examples")
{
    SUBCASE("duplicate timestamp")
    {
        const auto [out, report] = integrity_filter(make_table({"a", "a", "a", "a"}, {0, 1, 1, 2}), {});
        CHECK(out.at("time") == std::vector<double>{0, 1, 2});
        CHECK(report.dropped.at("duplicate_timestamp") == 1);
        CHECK(report.reconciles());
    }
    SUBCASE("negative time")
    {
        const auto [out, report] = integrity_filter(make_table({"a", "a", "a"}, {-1, 0, 1}), {});
        CHECK(out.at("time") == std::vector<double>{0, 1});
        CHECK(report.dropped.at("negative_time") == 1);
    }
    SUBCASE("negative torque")
    {
        RawTable t = make_table({"a", "a"}, {0, 1});
        t.add_column("torque", {-5.0, 10.0});
        IntegrityRules rules;
        rules.non_negative_columns = {"torque"};
        const auto [out, report] = integrity_filter(t, rules);
        CHECK(out.at("torque") == std::vector<double>{10.0});
        CHECK(report.dropped.at("negative_torque") == 1);
    }
    SUBCASE("everything removed")
    {
        CHECK_THROWS_AS(integrity_filter(make_table({"a", "a"}, {-2, -1}), {}), EmptyTripError);
    }
    SUBCASE("trip-id forward fill is capped")
    {
        std::vector<std::string> ids{"7"};
        ids.resize(5);
        IntegrityRules rules;
        rules.trip_id_fill_limit = 2;
        const auto [out, report] = integrity_filter(make_table(ids, {0, 1, 2, 3, 4}), rules);
        CHECK(out.trip_ids == std::vector<std::string>{"7", "7", "7"});
        CHECK(report.dropped.at("unresolved_trip_id") == 2);
    }
    SUBCASE("corrupted and non-integer trip ids")
    {
        IntegrityRules rules;
        rules.corrupted_trip_ids = {"bad"};
        rules.require_integer_trip_ids = true;
        const auto [out, report] =
            integrity_filter(make_table({"bad", "12.5", "12", "12"}, {0, 0, 0, 1}), rules);
        CHECK(out.trip_ids == std::vector<std::string>{"12", "12"});
        CHECK(report.dropped.at("corrupted_trip") == 2);
        CHECK(report.trips_dropped == std::vector<std::string>{"bad", "12.5"});
    }
    SUBCASE("missing values")
    {
        RawTable t = make_table({"a", "a", "a"}, {0, 1, 2});
        t.add_column("maf", {kNaN, 1.0, kNaN});
        t.add_column("ccps", {kNaN, kNaN, 2.0});
        IntegrityRules rules;
        rules.required_any = {{"maf", "ccps"}};
        const auto [out, report] = integrity_filter(t, rules);
        CHECK(out.at("time") == std::vector<double>{1, 2});
        CHECK(report.dropped.at("missing_value") == 1);
    }
}

TEST_CASE("strict filter examples")
{
    SUBCASE("acceleration above the limit")
    {
        Trip trip{"t", Domain::ICEV, "qx50", {plain_sample(0), plain_sample(1), plain_sample(2)}};
        trip.samples[1].longitudinal_accel = 12.0;
        const auto [out, report] = strict_filter(trip);
        CHECK(out.size() == 2);
        CHECK(report.dropped.at("accel_limit") == 1);
        CHECK(report.reconciles());
    }
    SUBCASE("torque above the bound")
    {
        Trip trip{"t", Domain::ICEV, "qx50", {plain_sample(0), plain_sample(1)}};
        trip.samples[0].motor_torque = 1500.0;
        const auto [out, report] = strict_filter(trip);
        CHECK(out.size() == 1);
        CHECK(report.dropped.at("bound_torque") == 1);
    }
    SUBCASE("IQR rule with k = 3")
    {
        std::vector<double> values;
        for (int i = 1; i <= 100; ++i) {
            values.push_back(i);
        }
        values.push_back(1000.0);
        const Fences f = iqr_fences(values, 3.0);
        CHECK(f.q1 == doctest::Approx(26.0));
        CHECK(f.q3 == doctest::Approx(76.0));
        CHECK(f.upper == doctest::Approx(226.0));
        CHECK(f.q1 == doctest::Approx(oracle::quantile7(values, 0.25)));

        Trip trip{"t", Domain::ICEV, "qx50", {}};
        for (std::size_t k = 0; k < values.size(); ++k) {
            auto s = plain_sample(static_cast<double>(k));
            s.co2_rate = values[k];
            trip.samples.push_back(s);
        }
        const auto [out, report] = strict_filter(trip);
        CHECK(out.size() == 100);
        CHECK(report.dropped.at("iqr_outlier") == 1);
        for (const auto& s : out.samples) {
            CHECK(s.co2_rate < 226.0);
        }
    }
    SUBCASE("empty trips are listed")
    {
        Trip bad{"gone", Domain::ICEV, "qx50", {plain_sample(0)}};
        bad.samples[0].velocity = 300.0;
        Trip good{"kept", Domain::ICEV, "qx50", {plain_sample(0), plain_sample(1)}};
        const auto [out, report] = strict_filter(std::vector<Trip>{bad, good});
        REQUIRE(out.size() == 1);
        CHECK(out[0].trip_id == "kept");
        CHECK(report.trips_dropped == std::vector<std::string>{"gone"});
    }
}

TEST_CASE("filters are idempotent and reconcile on fuzzed input")
{
    std::mt19937_64 g(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int c = 0; c < 300; ++c) {
        const std::size_t n = 1 + static_cast<std::size_t>(u(g) * 60);
        std::vector<std::string> ids(n);
        std::vector<double> time(n);
        std::vector<double> torque(n);
        for (std::size_t r = 0; r < n; ++r) {
            const double p = u(g);
            ids[r] = p < 0.15 ? "" : (p < 0.6 ? "1" : (p < 0.95 ? "2" : "x"));
            time[r] = std::floor(u(g) * 20.0) - 2.0;
            torque[r] = u(g) < 0.1 ? kNaN : 200.0 * u(g) - 20.0;
        }
        RawTable t = make_table(ids, time);
        t.add_column("torque", torque);
        IntegrityRules rules;
        rules.non_negative_columns = {"torque"};
        rules.required_columns = {"torque"};
        rules.require_integer_trip_ids = true;
        rules.trip_id_fill_limit = 3;
        try {
            const auto [once, r1] = integrity_filter(t, rules);
            CHECK(r1.reconciles());
            const auto [twice, r2] = integrity_filter(once, rules);
            CHECK(twice == once);
            CHECK(r2.dropped_total() == 0);
            CHECK(r2.reconciles());
        } catch (const EmptyTripError&) {
        }
    }

    for (int c = 0; c < 100; ++c) {
        std::vector<Trip> trips;
        const std::size_t count = 1 + static_cast<std::size_t>(u(g) * 4);
        for (std::size_t k = 0; k < count; ++k) {
            Trip trip{"t" + std::to_string(k), Domain::ICEV, "qx50", {}};
            const std::size_t n = 1 + static_cast<std::size_t>(u(g) * 80);
            for (std::size_t r = 0; r < n; ++r) {
                HarmonizedSample s = plain_sample(static_cast<double>(r));
                s.velocity = u(g) < 0.05 ? 400.0 * u(g) : 120.0 * u(g);
                s.throttle = 110.0 * u(g);
                s.motor_torque = u(g) < 0.05 ? 2000.0 * u(g) : 300.0 * u(g);
                s.ambient_temp = 10.0 + 20.0 * u(g);
                s.cabin_temp = u(g) < 0.02 ? 90.0 : 15.0 + 10.0 * u(g);
                s.longitudinal_accel = u(g) < 0.05 ? 30.0 * u(g) - 15.0 : 4.0 * u(g) - 2.0;
                s.co2_rate = u(g) < 0.03 ? 50.0 * u(g) : 5.0 * u(g);
                trip.samples.push_back(s);
            }
            trips.push_back(std::move(trip));
        }
        const auto [once, r1] = strict_filter(trips);
        CHECK(r1.reconciles());
        const auto [twice, r2] = strict_filter(once);
        CHECK(r2.dropped_total() == 0);
        REQUIRE(twice.size() == once.size());
        for (std::size_t k = 0; k < once.size(); ++k) {
            CHECK(twice[k].samples == once[k].samples);
        }
    }
}

TEST_CASE("profiles")
{
    CHECK(profile_names() == std::vector<std::string>{"i3", "blazer", "pacifica", "qx50", "qx50-strict"});
    for (const auto& name : profile_names()) {
        const auto p = profile_by_name(name);
        CHECK(p.name == name);
        CHECK_FALSE(p.required_headers().empty());
    }
    CHECK(profile_by_name("qx50-strict").vehicle == "qx50");
    CHECK(profile_by_name("qx50-strict").strict);
    CHECK(profile_by_name("i3").domain == Domain::EV);
    CHECK_THROWS_AS(profile_by_name("tesla"), ConfigError);
    CHECK(numeric_trip_id_from_filename("61706006 Test Data.txt") == "61706006");
}

TEST_CASE("ingest reads i3 files in filename order and recovers CO2")
{
    const auto dir = fresh_dir("i3");
    synth::WorldSpec spec;
    spec.ev_trips = 2;
    spec.icev_trips = 0;
    spec.samples_per_trip = 30;
    auto world = synth::make_world(spec);
    world.ev_trips[0].trip_id = "b_trip";
    world.ev_trips[1].trip_id = "a_trip";
    const emissions::EmissionFactors f;
    synth::write_i3_raw(dir, world.ev_trips, f);

    const auto result = ingest::ingest(dir, profile_by_name("i3"), f);
    REQUIRE(result.trips.size() == 2);
    CHECK(result.trips[0].trip_id == "a_trip");
    CHECK(result.trips[1].trip_id == "b_trip");
    CHECK(result.report.rows_in == 60);
    CHECK(result.report.reconciles());
    CHECK(result.report.rejected_files.empty());
    for (std::size_t k = 0; k < result.trips[0].size(); ++k) {
        CHECK(result.trips[0].samples[k].co2_rate ==
              doctest::Approx(world.ev_trips[1].samples[k].co2_rate).epsilon(1e-9));
        CHECK(result.trips[0].samples[k].velocity == doctest::Approx(world.ev_trips[1].samples[k].velocity));
    }
    const auto again = ingest::ingest(dir, profile_by_name("i3"), f);
    CHECK(format_harmonized(again.trips) == format_harmonized(result.trips));
    std::filesystem::remove_all(dir);
}

TEST_CASE("ingest rejects a file with a missing column")
{
    const auto dir = fresh_dir("reject");
    io::write_text_file(dir / "broken.csv", "Time [s];Velocity [km/h];Throttle [%]\n0;1;2\n1;2;3\n");
    const auto result = ingest::ingest(dir, profile_by_name("i3"), {});
    CHECK(result.trips.empty());
    REQUIRE(result.report.rejected_files.size() == 1);
    CHECK(result.report.rejected_files[0].first == "broken.csv");
    CHECK(result.report.rejected_files[0].second.find("Motor Torque [Nm]") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("ingest of QX50 dyno files converts mph and derives CO2 from MAF")
{
    const auto dir = fresh_dir("qx50");
    synth::WorldSpec spec;
    spec.ev_trips = 0;
    spec.icev_trips = 2;
    spec.samples_per_trip = 40;
    const auto world = synth::make_world(spec);
    const emissions::EmissionFactors f;
    synth::write_qx50_raw(dir, world.icev_trips, f);

    const auto result = ingest::ingest(dir, profile_by_name("qx50"), f);
    REQUIRE(result.trips.size() == 2);
    CHECK(result.trips[0].trip_id == "7000");
    CHECK(result.trips[0].domain == Domain::ICEV);
    const auto& src = world.icev_trips[0].samples;
    const auto& got = result.trips[0].samples;
    REQUIRE(got.size() == src.size());
    for (std::size_t k = 0; k < got.size(); ++k) {
        CHECK(got[k].velocity == doctest::Approx(src[k].velocity).epsilon(1e-9));
        CHECK(got[k].co2_rate == doctest::Approx(src[k].co2_rate).epsilon(1e-9));
    }
    CHECK(result.report.reconciles());

    const auto strict = ingest::ingest(dir, profile_by_name("qx50-strict"), f);
    CHECK(strict.report.reconciles());
    CHECK(strict.report.rows_in == 80);
    std::filesystem::remove_all(dir);
}

TEST_CASE("filter report text")
{
    FilterReport r;
    r.rows_in = 5;
    r.rows_out = 3;
    r.drop("negative_time", 2);
    const std::string text = format_filter_report(r, {"seed = 0"});
    CHECK(text.find("# seed = 0\n") == 0);
    CHECK(text.find("dropped.negative_time = 2") != std::string::npos);
}

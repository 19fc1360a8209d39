#include "powertwin/synth.hpp"
#include "powertwin/table_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;

int main(int argc, char** argv)
{
    CLI::App app{"Write a synthetic i3 + QX50 raw dataset and a matching run configuration", "powertwin_demo_data"};
    std::string out_dir;
    powertwin::synth::WorldSpec spec;
    spec.ev_trips = 12;
    spec.icev_trips = 3;
    spec.samples_per_trip = 300;
    app.add_option("out_dir", out_dir, "Output directory")->required();
    app.add_option("--seed", spec.seed, "World seed")->capture_default_str();
    app.add_option("--ev-trips", spec.ev_trips, "Number of EV trips")->capture_default_str();
    app.add_option("--icev-trips", spec.icev_trips, "Number of ICEV trips")->capture_default_str();
    app.add_option("--samples", spec.samples_per_trip, "Samples per trip")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    try {
        const fs::path root = fs::absolute(out_dir);
        const auto world = powertwin::synth::make_world(spec);
        const powertwin::emissions::EmissionFactors factors;
        powertwin::synth::write_i3_raw(root / "raw" / "i3", world.ev_trips, factors);
        powertwin::synth::write_qx50_raw(root / "raw" / "qx50", world.icev_trips, factors);
        const std::string conf = "# synthetic demo run\n"
                                 "run_dir = " + (root / "run").string() + "\n"
                                 "vehicles = i3, qx50\n"
                                 "raw.i3 = " + (root / "raw" / "i3").string() + "\n"
                                 "raw.qx50 = " + (root / "raw" / "qx50").string() + "\n"
                                 "seed = " + std::to_string(spec.seed) + "\n";
        powertwin::io::write_text_file(root / "powertwin.conf", conf);
        std::cout << "wrote " << world.ev_trips.size() << " EV and " << world.icev_trips.size()
                  << " ICEV trips under " << (root / "raw").string() << "\n"
                  << "config: " << (root / "powertwin.conf").string() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "powertwin_demo_data: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

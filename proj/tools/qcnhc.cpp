#include <chrono>
#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "qcnhc/io.hpp"

namespace fs = std::filesystem;
using namespace qcnhc;

namespace {

int run_one(EnsembleConfig cfg, const std::string& out_path) {
    const auto t0 = std::chrono::steady_clock::now();
    const ObservableSeries series = run_ensemble(cfg);
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - t0;

    write_series(series, make_manifest(cfg, series, wall.count()), out_path);
    std::printf("%s: %zu points, aborted %.4f, capped %.4f, drift %.3e (%.1f s)\n",
                out_path.c_str(), series.size(), series.aborted_fraction,
                series.capped_fraction, series.max_drift, wall.count());
    if (series.failed) {
        std::fprintf(stderr, "error: aborted fraction %.4f exceeds 1%%\n",
                     series.aborted_fraction);
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thermostatted quantum-classical spin-boson simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", fig_name;
    long seed = -1;

    auto* run = app.add_subcommand("run", "Run one ensemble from a config file");
    run->add_option("--config", config_path, "key = value config file")->required();
    run->add_option("--seed", seed, "override master_seed");
    run->add_option("--out", out_dir, "output directory");

    auto* preset = app.add_subcommand("preset", "Run all back-ends of a figure preset");
    preset->add_option("figure", fig_name, "fig1..fig5")->required();
    preset->add_option("--seed", seed, "override master_seed");
    preset->add_option("--out", out_dir, "output directory");

    std::string csv_a, csv_b;
    double tol = 0.05;
    auto* cmp = app.add_subcommand("compare", "Sup-norm difference of two series");
    cmp->add_option("a", csv_a, "first CSV")->required();
    cmp->add_option("b", csv_b, "second CSV")->required();
    cmp->add_option("--tol", tol, "failure threshold on sup|mean_a - mean_b|");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            EnsembleConfig cfg = parse_config_file(config_path);
            if (seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(seed);
            fs::create_directories(out_dir);
            const std::string out =
                (fs::path(out_dir) / (fs::path(config_path).stem().string() + ".csv"))
                    .string();
            return run_one(cfg, out);
        }
        if (preset->parsed()) {
            fs::create_directories(out_dir);
            int rc = 0;
            for (auto& [label, cfg] : preset_variants(fig_name)) {
                EnsembleConfig c = cfg;
                if (seed >= 0) c.master_seed = static_cast<std::uint64_t>(seed);
                const std::string out =
                    (fs::path(out_dir) / (fig_name + "_" + label + ".csv")).string();
                rc |= run_one(c, out);
            }
            return rc;
        }
        if (cmp->parsed()) {
            const ObservableSeries a = read_series(csv_a);
            const ObservableSeries b = read_series(csv_b);
            const SeriesComparison c = compare_series(a, b);
            double max_z = 0.0;
            for (double z : c.z_scores) max_z = std::max(max_z, z);
            std::printf("sup_diff %.6f  max_z %.2f  tol %.6f\n", c.sup_diff, max_z, tol);
            return c.sup_diff <= tol ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}

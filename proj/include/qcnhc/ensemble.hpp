#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcnhc/hopping.hpp"

// Parallel trajectory ensembles and the sigma_z estimator.  Trajectory i is
// seeded with master_seed + i; partial sums are accumulated per fixed-size
// block and merged in block order, so results are bit-identical for any
// worker count.

namespace qcnhc {

enum class Mode { adiabatic, nonadiabatic };

Mode mode_from_string(const std::string& s);
std::string to_string(Mode m);

struct EnsembleConfig {
    SpinBosonParams params;
    IntegratorConfig integ;
    long n_traj = 10000;
    double t_max = 10.0;
    int n_output = 200;
    Mode mode = Mode::adiabatic;
    bool populations_only = false;
    int max_hops = 6;
    std::uint64_t master_seed = 1;
    double tau = 0.0;  // thermostat timescale; 0 = 1/omega_max
    int n_workers = 0; // 0 = QCNHC_WORKERS env or hardware concurrency

    void validate() const;
    PropagationConfig propagation() const;
    bool operator==(const EnsembleConfig&) const = default;
};

struct ObservableSeries {
    std::vector<double> times;
    std::vector<double> mean;         // Re part of the estimator
    std::vector<double> stderror;
    std::vector<double> imag_mean;    // residue diagnostic
    std::vector<double> imag_stderror;
    std::vector<long> n_effective;
    double capped_fraction = 0.0;
    double aborted_fraction = 0.0;
    double max_drift = 0.0;
    double max_hop_error = 0.0;
    bool failed = false;  // aborted_fraction exceeded 1%

    std::size_t size() const { return times.size(); }
};

ObservableSeries run_ensemble(const EnsembleConfig& cfg);

struct SeriesComparison {
    double sup_diff = 0.0;
    std::vector<double> z_scores;  // |diff| / combined stderr, pointwise
};

// Requires identical time grids; throws std::invalid_argument otherwise.
SeriesComparison compare_series(const ObservableSeries& a, const ObservableSeries& b);

}  // namespace qcnhc

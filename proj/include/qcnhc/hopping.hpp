#pragma once

#include <vector>

#include "qcnhc/propagators.hpp"
#include "qcnhc/sampling.hpp"

// Surface-hopping realization of the quantum transition operator:
// piecewise-deterministic classical propagation interrupted by stochastic
// single-index hops with momentum jumps along the nonadiabatic coupling
// vector.

namespace qcnhc {

struct TrajectoryState {
    ExtendedPhasePoint x;
    SurfacePair pair;
    Complex weight{1.0, 0.0};
    double phase = 0.0;  // accumulated bohr_frequency * dt
    int hops = 0;
    bool alive = true;
};

// Candidate transition: flip either the left (alpha) or right (alpha')
// index of the pair.  rate = dt * (P/M) . d_{from,to}, signed; the signed
// value multiplies the weight on acceptance.
struct HopChannel {
    bool left = true;
    int target = 1;
    double rate = 0.0;  // includes the dt factor
};

struct HopDecision {
    HopChannel left;
    HopChannel right;
    double p_left = 0.0;   // a/(1+a) with a = |rate|
    double p_right = 0.0;
    double p_nohop = 1.0;  // (1-p_left)(1-p_right)
};

HopDecision hop_probability(const TrajectoryState& state, const AdiabaticData& adata,
                            const BathSpec& bath, double dt);

// Flips one index and rescales the momenta along d12/|d12| so that the
// mean-surface energy is exactly conserved.  Returns false (state
// untouched) when the directed kinetic energy cannot pay for the jump.
bool apply_hop(TrajectoryState& state, const HopChannel& channel,
               const AdiabaticData& adata, const BathSpec& bath);

struct PropagationConfig {
    IntegratorConfig integ;
    double t_max = 10.0;
    int n_output = 200;      // output intervals; n_output+1 recorded points
    int max_hops = 6;
    bool adiabatic = true;
    bool track_drift = true;

    int steps_per_output() const;
    int total_steps() const { return steps_per_output() * n_output; }
    void validate() const;
};

struct TrajectoryResult {
    std::vector<Complex> contrib;  // weight * exp(i phase) * sigma_z element
    bool aborted = false;
    bool capped = false;
    int hops = 0;
    double max_drift = 0.0;       // relative conserved-quantity drift (nve/nhc)
    double max_hop_error = 0.0;   // worst per-hop conservation error
};

TrajectoryResult propagate_trajectory(const InitialSample& init, const BathSpec& bath,
                                      const SpinBosonParams& params,
                                      const PropagationConfig& cfg, Rng& rng);

}  // namespace qcnhc

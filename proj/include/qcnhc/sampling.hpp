#pragma once

#include <random>

#include "qcnhc/model.hpp"

// Initial-condition sampling: subsystem in |up>, bath drawn from the thermal
// Wigner distribution of independent harmonic oscillators, surface pair
// importance-sampled from the |up><up| matrix elements in the adiabatic basis.

namespace qcnhc {

using Rng = std::mt19937_64;

struct InitialSample {
    ExtendedPhasePoint point;  // thermostat variables zeroed
    SurfacePair pair;
    Complex weight{0.0, 0.0};
};

// Var(R_j) = coth(beta*w_j/2)/(2 w_j), Var(P_j) = w_j coth(beta*w_j/2)/2.
void sample_bath_wigner(const BathSpec& bath, double beta, Rng& rng,
                        Vector& R, Vector& P);

// Classical canonical draw: Var(R_j) = kT/(M_j w_j^2), Var(P_j) = M_j kT.
// Used when params.bath_kt pins the surrogate-bath temperature, so the
// initial distribution is stationary under the thermostat.
void sample_bath_classical(const BathSpec& bath, double kt, Rng& rng,
                           Vector& R, Vector& P);

// w(alpha, alpha') = <alpha'|up><up|alpha> at entry (alpha-1, alpha'-1).
// Hermitian rank-1 projector; diagonal entries sum to 1.
Eigen::Matrix2cd initial_pair_weights(const AdiabaticData& adata);

// Draws (R, P), then a pair with probability proportional to |w|;
// weight = w / prob so the pair-sum estimator stays unbiased.
// With populations_only the draw is restricted to the diagonal pairs.
InitialSample draw_initial(const BathSpec& bath, const SpinBosonParams& params,
                           Rng& rng, bool populations_only = false);

}  // namespace qcnhc

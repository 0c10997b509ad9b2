#pragma once

#include <array>
#include <random>

#include "qcnhc/model.hpp"

// Classical propagation of the extended phase point on a fixed surface pair.
// All steppers advance in place; step_nve and step_nhc are deterministic,
// step_langevin consumes the provided RNG stream.

namespace qcnhc {

enum class Scheme { nve, nhc, bd };

Scheme scheme_from_string(const std::string& s);
std::string to_string(Scheme s);

// 3-stage Suzuki-Yoshida composition weights, sum to 1.
std::array<double, 3> suzuki_yoshida_weights();

struct IntegratorConfig {
    double dt = 0.01;
    Scheme scheme = Scheme::nhc;
    double zeta = 0.0;  // BD friction
    std::array<double, 3> sy_weights = suzuki_yoshida_weights();
    int n_respa = 1;

    void validate() const;
    bool operator==(const IntegratorConfig&) const = default;
};

// Mean-surface force F_j = -M_j w_j^2 R_j + (f^a_j + f^a'_j)/2 at x.R.
Vector mean_force(const Vector& R, SurfacePair pair, const BathSpec& bath,
                  const SpinBosonParams& params);

// One velocity-Verlet step under the mean-surface force; thermostat
// variables untouched.  f_cache, when non-null, must hold the force at the
// entry position and receives the force at the exit position.
void step_nve(ExtendedPhasePoint& x, SurfacePair pair, const BathSpec& bath,
              const SpinBosonParams& params, double dt, Vector* f_cache = nullptr);

// Half thermostat sub-flow (Suzuki-Yoshida composed, n_respa cycles),
// velocity-Verlet core, half thermostat sub-flow.  Conserves
// extended_energy to second order in dt.
void step_nhc(ExtendedPhasePoint& x, SurfacePair pair, const BathSpec& bath,
              const SpinBosonParams& params, const IntegratorConfig& cfg,
              Vector* f_cache = nullptr);

// Velocity-Verlet drift-kick followed by an exact Ornstein-Uhlenbeck
// momentum refresh with damping exp(-zeta*dt/M_j).  zeta = 0 reduces to
// step_nve without touching the RNG.
void step_langevin(ExtendedPhasePoint& x, SurfacePair pair, const BathSpec& bath,
                   const SpinBosonParams& params, double dt, double zeta,
                   std::mt19937_64& rng, Vector* f_cache = nullptr);

// NVE mean-surface energy or NHC extended energy; throws for Scheme::bd.
double conserved_quantity(const ExtendedPhasePoint& x, SurfacePair pair,
                          Scheme scheme, const BathSpec& bath,
                          const SpinBosonParams& params);

}  // namespace qcnhc

#include "qcnhc/propagators.hpp"

#include <cmath>
#include <stdexcept>

namespace qcnhc {

Scheme scheme_from_string(const std::string& s) {
    if (s == "nve") return Scheme::nve;
    if (s == "nhc") return Scheme::nhc;
    if (s == "bd") return Scheme::bd;
    throw std::invalid_argument("unknown scheme '" + s + "' (expected nve|nhc|bd)");
}

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::nve: return "nve";
        case Scheme::nhc: return "nhc";
        case Scheme::bd: return "bd";
    }
    return "?";
}

std::array<double, 3> suzuki_yoshida_weights() {
    const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
    return {w1, 1.0 - 2.0 * w1, w1};
}

void IntegratorConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (zeta < 0.0) throw std::invalid_argument("zeta must be >= 0");
    if (n_respa < 1) throw std::invalid_argument("n_respa must be >= 1");
    double sum = 0.0;
    for (double w : sy_weights) sum += w;
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("sy_weights must sum to 1");
}

Vector mean_force(const Vector& R, SurfacePair pair, const BathSpec& bath,
                  const SpinBosonParams& params) {
    Vector f = -(bath.mass.array() * bath.freq.array().square() * R.array());
    // the two surface forces cancel on off-diagonal pairs
    if (pair.diagonal()) {
        const double gamma = bath.coup.dot(R) + params.gamma_s;
        const double slope = gamma / std::hypot(params.omega, gamma);
        f += ((pair.alpha == 1) ? slope : -slope) * bath.coup;
    }
    return f;
}

namespace {

void verlet_core(ExtendedPhasePoint& x, SurfacePair pair, const BathSpec& bath,
                 const SpinBosonParams& params, double dt, Vector* f_cache) {
    Vector f = (f_cache && f_cache->size() == x.R.size())
                   ? *f_cache
                   : mean_force(x.R, pair, bath, params);
    x.P += 0.5 * dt * f;
    x.R.array() += dt * x.P.array() / bath.mass.array();
    f = mean_force(x.R, pair, bath, params);
    x.P += 0.5 * dt * f;
    if (f_cache) *f_cache = std::move(f);
}

// Martyna-Tuckerman-Klein update of the two-variable chain over a time
// span h, Suzuki-Yoshida composed with n_respa cycles.  Scales P and
// advances (eta1, eta2, p_eta1, p_eta2).
void thermostat_flow(ExtendedPhasePoint& x, const BathSpec& bath,
                     const SpinBosonParams& params, double h,
                     const IntegratorConfig& cfg) {
    const double kT = params.bath_temperature();
    const int n = bath.size();
    double twice_kin = (x.P.array().square() / bath.mass.array()).sum();
    double scale = 1.0;

    for (int cycle = 0; cycle < cfg.n_respa; ++cycle) {
        for (double w : cfg.sy_weights) {
            const double d2 = w * h / cfg.n_respa;
            const double d4 = 0.5 * d2;
            const double d8 = 0.5 * d4;

            double g2 = x.p_eta1 * x.p_eta1 / params.m_eta1 - kT;
            x.p_eta2 += d4 * g2;
            x.p_eta1 *= std::exp(-d8 * x.p_eta2 / params.m_eta2);
            double g1 = twice_kin - n * kT;
            x.p_eta1 += d4 * g1;
            x.p_eta1 *= std::exp(-d8 * x.p_eta2 / params.m_eta2);

            x.eta1 += d2 * x.p_eta1 / params.m_eta1;
            x.eta2 += d2 * x.p_eta2 / params.m_eta2;

            const double s = std::exp(-d2 * x.p_eta1 / params.m_eta1);
            scale *= s;
            twice_kin *= s * s;

            x.p_eta1 *= std::exp(-d8 * x.p_eta2 / params.m_eta2);
            g1 = twice_kin - n * kT;
            x.p_eta1 += d4 * g1;
            x.p_eta1 *= std::exp(-d8 * x.p_eta2 / params.m_eta2);
            g2 = x.p_eta1 * x.p_eta1 / params.m_eta1 - kT;
            x.p_eta2 += d4 * g2;
        }
    }
    x.P *= scale;
}

}  // namespace

void step_nve(ExtendedPhasePoint& x, SurfacePair pair, const BathSpec& bath,
              const SpinBosonParams& params, double dt, Vector* f_cache) {
    verlet_core(x, pair, bath, params, dt, f_cache);
}

void step_nhc(ExtendedPhasePoint& x, SurfacePair pair, const BathSpec& bath,
              const SpinBosonParams& params, const IntegratorConfig& cfg,
              Vector* f_cache) {
    thermostat_flow(x, bath, params, 0.5 * cfg.dt, cfg);
    verlet_core(x, pair, bath, params, cfg.dt, f_cache);
    thermostat_flow(x, bath, params, 0.5 * cfg.dt, cfg);
}

void step_langevin(ExtendedPhasePoint& x, SurfacePair pair, const BathSpec& bath,
                   const SpinBosonParams& params, double dt, double zeta,
                   std::mt19937_64& rng, Vector* f_cache) {
    verlet_core(x, pair, bath, params, dt, f_cache);
    if (zeta == 0.0) return;
    const double kT = params.bath_temperature();
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int j = 0; j < bath.size(); ++j) {
        const double m = bath.mass[j];
        const double c = std::exp(-zeta * dt / m);
        const double sigma = std::sqrt(m * kT * (1.0 - c * c));
        x.P[j] = c * x.P[j] + sigma * gauss(rng);
    }
}

double conserved_quantity(const ExtendedPhasePoint& x, SurfacePair pair,
                          Scheme scheme, const BathSpec& bath,
                          const SpinBosonParams& params) {
    switch (scheme) {
        case Scheme::nve: return nve_energy(x, pair, bath, params);
        case Scheme::nhc: return extended_energy(x, pair, bath, params);
        case Scheme::bd: break;
    }
    throw std::invalid_argument("conserved_quantity: bd has no conserved quantity");
}

}  // namespace qcnhc

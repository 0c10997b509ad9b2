#include "qcnhc/hopping.hpp"

#include <cmath>
#include <stdexcept>

namespace qcnhc {

namespace {

// d_{12} = +d12, d_{21} = -d12.
double coupling_sign(int from) { return (from == 1) ? +1.0 : -1.0; }

}  // namespace

int PropagationConfig::steps_per_output() const {
    if (t_max == 0.0) return 0;
    const double steps = t_max / integ.dt;
    int stride = static_cast<int>(std::lround(steps / n_output));
    return stride < 1 ? 1 : stride;
}

void PropagationConfig::validate() const {
    integ.validate();
    if (t_max < 0.0) throw std::invalid_argument("t_max must be >= 0");
    if (n_output < 1) throw std::invalid_argument("n_output must be >= 1");
    if (max_hops < 0) throw std::invalid_argument("max_hops must be >= 0");
    if (t_max > 0.0) {
        const double covered = total_steps() * integ.dt;
        if (std::abs(covered - t_max) > integ.dt)
            throw std::invalid_argument(
                "n_output does not tile [0, t_max] within one step");
    }
}

HopDecision hop_probability(const TrajectoryState& state, const AdiabaticData& adata,
                            const BathSpec& bath, double dt) {
    const double vdotd = (state.x.P.array() / bath.mass.array() *
                          adata.d12.array()).sum();
    HopDecision d;
    d.left.left = true;
    d.left.target = (state.pair.alpha == 1) ? 2 : 1;
    d.left.rate = dt * coupling_sign(state.pair.alpha) * vdotd;
    d.right.left = false;
    d.right.target = (state.pair.alpha_prime == 1) ? 2 : 1;
    d.right.rate = dt * coupling_sign(state.pair.alpha_prime) * vdotd;

    const double a_left = std::abs(d.left.rate);
    const double a_right = std::abs(d.right.rate);
    d.p_left = a_left / (1.0 + a_left);
    d.p_right = a_right / (1.0 + a_right);
    d.p_nohop = (1.0 - d.p_left) * (1.0 - d.p_right);
    return d;
}

bool apply_hop(TrajectoryState& state, const HopChannel& channel,
               const AdiabaticData& adata, const BathSpec& bath) {
    const int from = channel.left ? state.pair.alpha : state.pair.alpha_prime;
    // Mean-surface energy change old-minus-new: flipping 1->2 raises the
    // mean surface by G, 2->1 lowers it by G.
    const double delta_e = (from == 1) ? -adata.gap_g : +adata.gap_g;

    const double dnorm = adata.d12.norm();
    if (dnorm == 0.0) return false;
    const Vector dhat = adata.d12 / dnorm;

    const double inv_mu = (dhat.array().square() / bath.mass.array()).sum();
    const double mu = 1.0 / inv_mu;
    const double v_par = (state.x.P.array() / bath.mass.array() * dhat.array()).sum();
    const double p_par = mu * v_par;

    const double radicand = p_par * p_par + 2.0 * mu * delta_e;
    if (radicand < 0.0) return false;  // frustrated

    const double sign = (p_par >= 0.0) ? 1.0 : -1.0;
    const double p_par_new = sign * std::sqrt(radicand);
    state.x.P += (p_par_new - p_par) * dhat;
    if (channel.left)
        state.pair.alpha = channel.target;
    else
        state.pair.alpha_prime = channel.target;
    state.hops += 1;
    return true;
}

TrajectoryResult propagate_trajectory(const InitialSample& init, const BathSpec& bath,
                                      const SpinBosonParams& params,
                                      const PropagationConfig& cfg, Rng& rng) {
    cfg.validate();
    const double dt = cfg.integ.dt;
    const Scheme scheme = cfg.integ.scheme;
    const int stride = cfg.steps_per_output();
    const int n_points = (cfg.t_max == 0.0) ? 1 : cfg.n_output + 1;

    TrajectoryState st;
    st.x = init.point;
    st.pair = init.pair;
    st.weight = init.weight;

    TrajectoryResult res;
    res.contrib.assign(n_points, Complex{0.0, 0.0});

    const bool monitor = cfg.track_drift && scheme != Scheme::bd;
    double c0 = 0.0;
    if (monitor) c0 = conserved_quantity(st.x, st.pair, scheme, bath, params);
    const double c_ref = std::max(std::abs(c0), 1.0);

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Vector f_cache;  // force at current R for the current pair
    int point = 0;

    auto record = [&](const AdiabaticData& adata) {
        const Eigen::Matrix2cd sz = sigma_z_matrix(adata);
        const Complex elem = sz(st.pair.alpha - 1, st.pair.alpha_prime - 1);
        res.contrib[point] =
            st.weight * std::exp(Complex{0.0, st.phase}) * elem;
        ++point;
    };

    record(adiabatic_eval(st.x.R, bath, params));

    const int n_steps = (cfg.t_max == 0.0) ? 0 : cfg.total_steps();
    double gamma = bath.coup.dot(st.x.R) + params.gamma_s;
    for (int step = 1; step <= n_steps; ++step) {
        const double gamma_old = gamma;
        switch (scheme) {
            case Scheme::nve:
                step_nve(st.x, st.pair, bath, params, dt, &f_cache);
                break;
            case Scheme::nhc:
                step_nhc(st.x, st.pair, bath, params, cfg.integ, &f_cache);
                break;
            case Scheme::bd:
                step_langevin(st.x, st.pair, bath, params, dt, cfg.integ.zeta,
                              rng, &f_cache);
                break;
        }

        gamma = bath.coup.dot(st.x.R) + params.gamma_s;
        if (!st.pair.diagonal()) {
            // Gamma_eff is linear in R, so the step-midpoint value is the mean
            const double gap = std::hypot(params.omega, 0.5 * (gamma_old + gamma));
            st.phase += ((st.pair.alpha == 1) ? -2.0 * gap : 2.0 * gap) * dt;
        }

        if (!cfg.adiabatic && st.hops < cfg.max_hops) {
            const AdiabaticData adata = adiabatic_eval(st.x.R, bath, params);
            const HopDecision dec = hop_probability(st, adata, bath, dt);
            bool hopped = false;
            // Left and right channels decided independently; both firing in
            // one step realizes a double hop as two events.  A channel that
            // fires but is frustrated terminates the trajectory with zero
            // weight: that branch of the transition expansion is not
            // realizable, and the declined branch already carries the full
            // no-hop amplitude through its 1/(1-p) factor.
            if (unif(rng) < dec.p_left) {
                double before = 0.0;
                if (monitor)
                    before = conserved_quantity(st.x, st.pair, scheme, bath, params);
                if (apply_hop(st, dec.left, adata, bath)) {
                    st.weight *= dec.left.rate / dec.p_left;
                    hopped = true;
                    if (monitor) {
                        const double after =
                            conserved_quantity(st.x, st.pair, scheme, bath, params);
                        res.max_hop_error =
                            std::max(res.max_hop_error, std::abs(after - before));
                    }
                } else {
                    st.alive = false;
                }
            } else {
                st.weight /= 1.0 - dec.p_left;
            }
            if (st.alive && st.hops < cfg.max_hops) {
                if (unif(rng) < dec.p_right) {
                    double before = 0.0;
                    if (monitor)
                        before = conserved_quantity(st.x, st.pair, scheme, bath, params);
                    if (apply_hop(st, dec.right, adata, bath)) {
                        st.weight *= dec.right.rate / dec.p_right;
                        hopped = true;
                        if (monitor) {
                            const double after =
                                conserved_quantity(st.x, st.pair, scheme, bath, params);
                            res.max_hop_error =
                                std::max(res.max_hop_error, std::abs(after - before));
                        }
                    } else {
                        st.alive = false;
                    }
                } else {
                    st.weight /= 1.0 - dec.p_right;
                }
            }
            if (!st.alive) {
                st.weight = Complex{0.0, 0.0};
                point = n_points;  // remaining contributions stay zero
                break;
            }
            if (hopped) f_cache.resize(0);  // mean force depends on the pair
            if (st.hops >= cfg.max_hops) res.capped = true;
        }

        if (!st.x.finite() || !std::isfinite(st.weight.real()) ||
            !std::isfinite(st.weight.imag())) {
            res.aborted = true;
            break;
        }

        if (step % stride == 0) {
            record(adiabatic_eval(st.x.R, bath, params));
            if (monitor) {
                const double c = conserved_quantity(st.x, st.pair, scheme, bath, params);
                res.max_drift = std::max(res.max_drift, std::abs(c - c0) / c_ref);
            }
        }
    }

    res.hops = st.hops;
    res.contrib.resize(point);
    return res;
}

}  // namespace qcnhc

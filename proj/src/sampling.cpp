#include "qcnhc/sampling.hpp"

#include <array>
#include <cmath>

namespace qcnhc {

void sample_bath_wigner(const BathSpec& bath, double beta, Rng& rng,
                        Vector& R, Vector& P) {
    const int n = bath.size();
    R.resize(n);
    P.resize(n);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int j = 0; j < n; ++j) {
        const double w = bath.freq[j];
        const double m = bath.mass[j];
        const double c = 1.0 / std::tanh(0.5 * beta * w);
        R[j] = std::sqrt(c / (2.0 * m * w)) * gauss(rng);
        P[j] = std::sqrt(0.5 * m * w * c) * gauss(rng);
    }
}

void sample_bath_classical(const BathSpec& bath, double kt, Rng& rng,
                           Vector& R, Vector& P) {
    const int n = bath.size();
    R.resize(n);
    P.resize(n);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int j = 0; j < n; ++j) {
        const double w = bath.freq[j];
        const double m = bath.mass[j];
        R[j] = std::sqrt(kt / (m * w * w)) * gauss(rng);
        P[j] = std::sqrt(m * kt) * gauss(rng);
    }
}

Eigen::Matrix2cd initial_pair_weights(const AdiabaticData& adata) {
    // |up> components on the adiabatic states: <1|up> = cos(theta/2),
    // <2|up> = -sin(theta/2), with theta the mixing angle.
    const double theta = std::atan2(adata.hbar_omega, adata.gamma_eff);
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const double up1 = c;
    const double up2 = -s;
    Eigen::Matrix2cd w;
    w << up1 * up1, up2 * up1, up1 * up2, up2 * up2;
    return w;
}

InitialSample draw_initial(const BathSpec& bath, const SpinBosonParams& params,
                           Rng& rng, bool populations_only) {
    InitialSample s;
    s.point = ExtendedPhasePoint::zero(bath.size());
    if (params.bath_kt > 0.0)
        sample_bath_classical(bath, params.bath_kt, rng, s.point.R, s.point.P);
    else
        sample_bath_wigner(bath, params.beta, rng, s.point.R, s.point.P);

    const AdiabaticData adata = adiabatic_eval(s.point.R, bath, params);
    const Eigen::Matrix2cd w = initial_pair_weights(adata);

    std::array<SurfacePair, 4> pairs = {{{1, 1}, {1, 2}, {2, 1}, {2, 2}}};
    const int n_pairs = populations_only ? 2 : 4;
    std::array<SurfacePair, 4> cand;
    std::array<double, 4> mag;
    double total = 0.0;
    int k = 0;
    for (const SurfacePair& p : pairs) {
        if (populations_only && !p.diagonal()) continue;
        cand[k] = p;
        mag[k] = std::abs(w(p.alpha - 1, p.alpha_prime - 1));
        total += mag[k];
        ++k;
    }

    // Diagonal magnitudes sum to 1, so total > 0 always.
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(rng) * total;
    int sel = -1;
    for (int i = 0; i < n_pairs; ++i) {
        if (mag[i] == 0.0) continue;
        sel = i;
        u -= mag[i];
        if (u < 0.0) break;
    }
    s.pair = cand[sel];
    const double prob = mag[sel] / total;
    s.weight = w(s.pair.alpha - 1, s.pair.alpha_prime - 1) / prob;
    return s;
}

}  // namespace qcnhc

#include "qcnhc/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qcnhc {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void SpinBosonParams::validate() const {
    require(omega > 0.0, "omega must be > 0");
    require(kondo >= 0.0, "kondo must be >= 0");
    require(beta > 0.0, "beta must be > 0");
    require(omega_max > 0.0, "omega_max must be > 0");
    require(n_bath >= 1, "n_bath must be >= 1");
    require(m_eta1 > 0.0, "m_eta1 must be > 0");
    require(m_eta2 > 0.0, "m_eta2 must be > 0");
    require(std::isfinite(bath_kt) && bath_kt >= 0.0, "bath_kt must be >= 0");
    require(std::isfinite(omega) && std::isfinite(kondo) && std::isfinite(beta) &&
                std::isfinite(omega_max) && std::isfinite(gamma_s),
            "parameters must be finite");
}

void SpinBosonParams::apply_default_thermostat_masses(double tau) {
    if (tau <= 0.0) tau = 1.0 / omega_max;
    const double kT = bath_temperature();
    m_eta1 = n_bath * kT * tau * tau;
    m_eta2 = kT * tau * tau;
}

double width_matched_bath_kt(double beta, double omega_max) {
    // Simpson quadrature of (w/2) coth(beta w/2) e^-w; the integrand tends
    // to 1/beta at w = 0.
    const int n = 2000;  // intervals (even)
    const double h = omega_max / n;
    auto f = [beta](double w) {
        if (w == 0.0) return 1.0 / beta;
        return 0.5 * w / std::tanh(0.5 * beta * w) * std::exp(-w);
    };
    double sum = f(0.0) + f(omega_max);
    for (int k = 1; k < n; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(k * h);
    return (h / 3.0) * sum / (1.0 - std::exp(-omega_max));
}

double BathSpec::reorganization_energy() const {
    return (coup.array().square() / (2.0 * mass.array() * freq.array().square())).sum();
}

ExtendedPhasePoint ExtendedPhasePoint::zero(int n_bath) {
    ExtendedPhasePoint x;
    x.R = Vector::Zero(n_bath);
    x.P = Vector::Zero(n_bath);
    return x;
}

bool ExtendedPhasePoint::finite() const {
    return R.allFinite() && P.allFinite() && std::isfinite(eta1) &&
           std::isfinite(eta2) && std::isfinite(p_eta1) && std::isfinite(p_eta2);
}

BathSpec build_ohmic_bath(const SpinBosonParams& params) {
    require(params.n_bath >= 1, "build_ohmic_bath: n_bath must be >= 1");
    const int n = params.n_bath;
    const double omega0 = (1.0 - std::exp(-params.omega_max)) / n;

    BathSpec bath;
    bath.mass = Vector::Ones(n);
    bath.freq.resize(n);
    bath.coup.resize(n);
    for (int j = 1; j <= n; ++j) {
        const double w = -std::log(1.0 - j * omega0);
        require(std::isfinite(w) && w > 0.0, "build_ohmic_bath: non-finite frequency");
        bath.freq[j - 1] = w;
        bath.coup[j - 1] = w * std::sqrt(params.kondo * omega0);
    }
    return bath;
}

AdiabaticData adiabatic_eval(const Vector& R, const BathSpec& bath,
                             const SpinBosonParams& params) {
    AdiabaticData a;
    a.hbar_omega = params.omega;
    a.gamma_eff = bath.coup.dot(R) + params.gamma_s;
    a.gap_g = std::hypot(a.hbar_omega, a.gamma_eff);
    a.e1 = -a.gap_g;
    a.e2 = +a.gap_g;
    const double slope = a.gamma_eff / a.gap_g;
    a.f1 = slope * bath.coup;
    a.f2 = -a.f1;
    a.d12 = (a.hbar_omega / (2.0 * a.gap_g * a.gap_g)) * bath.coup;
    return a;
}

double nve_energy(const ExtendedPhasePoint& x, SurfacePair pair,
                  const BathSpec& bath, const SpinBosonParams& params) {
    const AdiabaticData a = adiabatic_eval(x.R, bath, params);
    const double e_alpha = (pair.alpha == 1) ? a.e1 : a.e2;
    const double e_alpha_p = (pair.alpha_prime == 1) ? a.e1 : a.e2;
    const double kin = 0.5 * (x.P.array().square() / bath.mass.array()).sum();
    const double pot =
        0.5 * (bath.mass.array() * bath.freq.array().square() * x.R.array().square()).sum();
    return kin + pot + 0.5 * (e_alpha + e_alpha_p);
}

double extended_energy(const ExtendedPhasePoint& x, SurfacePair pair,
                       const BathSpec& bath, const SpinBosonParams& params) {
    const double kT = params.bath_temperature();
    return nve_energy(x, pair, bath, params) +
           0.5 * x.p_eta1 * x.p_eta1 / params.m_eta1 +
           0.5 * x.p_eta2 * x.p_eta2 / params.m_eta2 +
           bath.size() * kT * x.eta1 + kT * x.eta2;
}

double bohr_frequency(SurfacePair pair, const AdiabaticData& adata) {
    if (pair.diagonal()) return 0.0;
    const double e_alpha = (pair.alpha == 1) ? adata.e1 : adata.e2;
    const double e_alpha_p = (pair.alpha_prime == 1) ? adata.e1 : adata.e2;
    return e_alpha - e_alpha_p;
}

Eigen::Matrix2cd sigma_z_matrix(const AdiabaticData& adata) {
    const double cos_theta = adata.gamma_eff / adata.gap_g;
    const double sin_theta = adata.hbar_omega / adata.gap_g;
    Eigen::Matrix2cd m;
    m << cos_theta, -sin_theta, -sin_theta, -cos_theta;
    return m;
}

}  // namespace qcnhc

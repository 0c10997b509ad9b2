#pragma once

#include <Eigen/Dense>
#include <complex>

// Core definitions of the thermostatted spin-boson system: parameters,
// bath discretization, extended phase-space point, and the adiabatic
// eigenstructure (energies, forces, nonadiabatic coupling) at fixed bath
// configuration.  Dimensionless units throughout: hbar = kB = M_j = 1 and
// the Ohmic cutoff frequency omega_c = 1.

namespace qcnhc {

using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

struct SpinBosonParams {
    double omega = 1.0 / 3.0;   // two-level tunneling frequency (gap = 2*omega)
    double kondo = 0.0;         // Ohmic coupling strength xi
    double beta = 1.0;          // inverse temperature
    double omega_max = 3.0;     // bath spectral cutoff
    double gamma_s = 0.0;       // static sigma_z bias
    int n_bath = 1;
    double m_eta1 = 0.0;        // thermostat masses; 0 means "use default heuristic"
    double m_eta2 = 0.0;
    // When > 0: the classical bath degrees of freedom are prepared at and
    // thermostatted toward this temperature instead of 1/beta.  Used by the
    // single-oscillator surrogate back-ends so their stationary fluctuation
    // of Gamma_eff matches the many-oscillator reference bath (see
    // width_matched_bath_kt); 0 keeps the plain canonical temperature.
    double bath_kt = 0.0;

    double temperature() const { return 1.0 / beta; }
    double bath_temperature() const { return bath_kt > 0.0 ? bath_kt : 1.0 / beta; }

    // Throws std::invalid_argument naming the violated constraint.
    void validate() const;

    // m_eta1 = n_bath*kB*T*tau^2, m_eta2 = kB*T*tau^2 with tau = 1/omega_max.
    void apply_default_thermostat_masses(double tau = 0.0);

    bool operator==(const SpinBosonParams&) const = default;
};

struct BathSpec {
    Vector mass;     // M_j, all 1 in these units
    Vector freq;     // omega_j, strictly increasing
    Vector coup;     // c_j

    int size() const { return static_cast<int>(freq.size()); }

    // sum_j c_j^2 / (2 M_j omega_j^2); converges as n_bath grows
    double reorganization_energy() const;
};

// Ordering convention X = (R, eta1, eta2, P, p_eta1, p_eta2).
struct ExtendedPhasePoint {
    Vector R;
    Vector P;
    double eta1 = 0.0;
    double eta2 = 0.0;
    double p_eta1 = 0.0;
    double p_eta2 = 0.0;

    static ExtendedPhasePoint zero(int n_bath);
    bool finite() const;
};

// Adiabatic index pair (alpha, alpha') labeling a density-matrix element.
// Index 1 is the lower surface.
struct SurfacePair {
    int alpha = 1;
    int alpha_prime = 1;

    bool diagonal() const { return alpha == alpha_prime; }
    SurfacePair swapped() const { return {alpha_prime, alpha}; }
    bool operator==(const SurfacePair&) const = default;
};

// Eigenstructure of -hbar*Omega*sigma_x - Gamma_eff*sigma_z at fixed R.
// Gamma_eff = sum_j c_j R_j + hbar*gamma_s.  Eigenvectors follow the mixing
// angle theta = atan2(hbar*Omega, Gamma_eff):
//   |1> = (cos(theta/2), sin(theta/2)),  |2> = (-sin(theta/2), cos(theta/2))
// in the sigma_z basis, so that e1 = -G <= e2 = +G.
struct AdiabaticData {
    double e1 = 0.0;
    double e2 = 0.0;
    double gap_g = 0.0;       // G = sqrt((hbar*Omega)^2 + Gamma_eff^2)
    double gamma_eff = 0.0;
    double hbar_omega = 0.0;  // kept alongside G to avoid cancellation
    Vector f1;                // -dE_1/dR
    Vector f2;                // -dE_2/dR
    Vector d12;               // <1|d/dR|2>; d21 = -d12
};

// Ohmic discretization: omega_0 = (1 - exp(-omega_max)) / n_bath,
// omega_j = -ln(1 - j*omega_0), c_j = omega_j * sqrt(kondo * omega_0),
// j = 1..n_bath (omega_c = 1).
BathSpec build_ohmic_bath(const SpinBosonParams& params);

// Temperature at which a classical oscillator at the cutoff frequency
// reproduces the coupling-weighted position fluctuation
// sum_j c_j^2 Var(R_j) of the Wigner-sampled Ohmic bath (continuum limit):
// kT* = [int_0^wmax (w/2) coth(beta w/2) e^-w dw] / (1 - e^-wmax).
// Independent of the coupling strength; -> 1/beta in the classical limit.
double width_matched_bath_kt(double beta, double omega_max);

AdiabaticData adiabatic_eval(const Vector& R, const BathSpec& bath,
                             const SpinBosonParams& params);

// Mean-surface energy without thermostat terms:
// sum P^2/2M + sum M w^2 R^2/2 + (E_a + E_a')/2.
double nve_energy(const ExtendedPhasePoint& x, SurfacePair pair,
                  const BathSpec& bath, const SpinBosonParams& params);

// Extended NHC energy: nve_energy plus the four thermostat terms
// p_eta1^2/2m1 + p_eta2^2/2m2 + n_bath*kB*T*eta1 + kB*T*eta2.
double extended_energy(const ExtendedPhasePoint& x, SurfacePair pair,
                       const BathSpec& bath, const SpinBosonParams& params);

// (E_alpha - E_alpha')/hbar; zero on diagonal pairs.
double bohr_frequency(SurfacePair pair, const AdiabaticData& adata);

// <alpha|sigma_z|alpha'> in the adiabatic basis, entry (alpha-1, alpha'-1).
// Diagonal +-Gamma_eff/G, off-diagonal -hbar*Omega/G; Hermitian, traceless.
Eigen::Matrix2cd sigma_z_matrix(const AdiabaticData& adata);

}  // namespace qcnhc

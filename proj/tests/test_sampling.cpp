#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qcnhc/sampling.hpp"

using namespace qcnhc;

namespace {

SpinBosonParams make_params(int n_bath, double kondo, double beta) {
    SpinBosonParams p;
    p.omega = 1.0 / 3.0;
    p.kondo = kondo;
    p.beta = beta;
    p.omega_max = 3.0;
    p.n_bath = n_bath;
    p.apply_default_thermostat_masses();
    return p;
}

}  // namespace

TEST_CASE("wigner widths match sample statistics") {
    // beta = 0.3, omega_1 = 3: Var(P) = (3/2) coth(0.45)
    const SpinBosonParams p = make_params(1, 0.1, 0.3);
    const BathSpec bath = build_ohmic_bath(p);
    Rng rng(42);
    const long n = 1000000;
    double sum_r2 = 0.0, sum_p2 = 0.0, sum_r = 0.0, sum_p = 0.0;
    Vector R, P;
    for (long i = 0; i < n; ++i) {
        sample_bath_wigner(bath, p.beta, rng, R, P);
        sum_r += R[0];
        sum_p += P[0];
        sum_r2 += R[0] * R[0];
        sum_p2 += P[0] * P[0];
    }
    const double var_r = sum_r2 / n - std::pow(sum_r / n, 2);
    const double var_p = sum_p2 / n - std::pow(sum_p / n, 2);
    const double coth = 1.0 / std::tanh(0.45);
    CHECK(var_p == doctest::Approx(3.5553532512150237).epsilon(0.01));
    CHECK(var_p == doctest::Approx(1.5 * coth).epsilon(0.01));
    CHECK(var_r == doctest::Approx(coth / 6.0).epsilon(0.01));
}

TEST_CASE("wigner widths interpolate between quantum and classical limits") {
    const SpinBosonParams p = make_params(1, 0.0, 1.0);
    const BathSpec bath = build_ohmic_bath(p);
    const double w = bath.freq[0];
    Rng rng(9);
    Vector R, P;

    // beta*w >> 1: zero-point momentum width w/2
    double sum_p2 = 0.0;
    const long n = 200000;
    for (long i = 0; i < n; ++i) {
        sample_bath_wigner(bath, 2000.0, rng, R, P);
        sum_p2 += P[0] * P[0];
    }
    CHECK(sum_p2 / n == doctest::Approx(0.5 * w).epsilon(0.02));

    // beta*w << 1: classical equipartition 1/beta
    sum_p2 = 0.0;
    const double beta_cl = 1e-3;
    for (long i = 0; i < n; ++i) {
        sample_bath_wigner(bath, beta_cl, rng, R, P);
        sum_p2 += P[0] * P[0];
    }
    CHECK(sum_p2 / n == doctest::Approx(1.0 / beta_cl).epsilon(0.02));
}

TEST_CASE("initial pair weights") {
    const SpinBosonParams p = make_params(2, 0.1, 3.0);
    const BathSpec bath = build_ohmic_bath(p);

    SUBCASE("symmetric point splits evenly") {
        const auto w = initial_pair_weights(adiabatic_eval(Vector::Zero(2), bath, p));
        CHECK(w(0, 0).real() == doctest::Approx(0.5));
        CHECK(w(1, 1).real() == doctest::Approx(0.5));
        CHECK(w(0, 1).real() == doctest::Approx(-0.5));
        CHECK(w(1, 0).real() == doctest::Approx(-0.5));
    }
    SUBCASE("aligned limit concentrates on one surface") {
        const auto w = initial_pair_weights(
            adiabatic_eval(Vector::Constant(2, 1e6), bath, p));
        CHECK(w(0, 0).real() == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(std::abs(w(1, 1)) < 1e-6);
        CHECK(std::abs(w(0, 1)) < 1e-4);
    }
    SUBCASE("hermitian rank-1 projector with unit trace at random R") {
        Rng rng(5);
        std::normal_distribution<double> gauss(0.0, 2.0);
        for (int trial = 0; trial < 50; ++trial) {
            Vector R(2);
            R << gauss(rng), gauss(rng);
            const AdiabaticData a = adiabatic_eval(R, bath, p);
            const auto w = initial_pair_weights(a);
            CHECK((w(0, 0) + w(1, 1)).real() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(w(0, 1) == std::conj(w(1, 0)));
            CHECK(std::abs(w.determinant()) < 1e-12);  // rank 1
            // consistency with the numeric eigenvectors: w = <a'|up><up|a>
            const auto ep = oracle::diagonalize(R, bath, p);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    CHECK(w(i, j).real() ==
                          doctest::Approx(ep.evecs(0, j) * ep.evecs(0, i))
                              .epsilon(1e-9));
        }
    }
}

TEST_CASE("draw_initial gives an unbiased sigma_z estimate at t=0") {
    const SpinBosonParams p = make_params(2, 0.1, 3.0);
    const BathSpec bath = build_ohmic_bath(p);
    Rng rng(123);
    const long n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (long i = 0; i < n; ++i) {
        const InitialSample s = draw_initial(bath, p, rng);
        const auto sz = sigma_z_matrix(adiabatic_eval(s.point.R, bath, p));
        const double v =
            (s.weight * sz(s.pair.alpha - 1, s.pair.alpha_prime - 1)).real();
        sum += v;
        sum2 += v * v;
        CHECK(s.point.eta1 == 0.0);
        CHECK(s.point.p_eta1 == 0.0);
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::abs(mean - 1.0) < 3.0 * se);
}

TEST_CASE("populations-only sampling restricts to diagonal pairs") {
    const SpinBosonParams p = make_params(1, 0.1, 0.3);
    const BathSpec bath = build_ohmic_bath(p);
    Rng rng(77);
    double sum = 0.0;
    const long n = 20000;
    for (long i = 0; i < n; ++i) {
        const InitialSample s = draw_initial(bath, p, rng, true);
        CHECK(s.pair.diagonal());
        sum += s.weight.real();  // trace estimator
    }
    CHECK(sum / n == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("pinned bath temperature draws classical canonical widths") {
    SpinBosonParams p = make_params(1, 0.1, 3.0);
    p.bath_kt = 0.5495125011514305;
    const BathSpec bath = build_ohmic_bath(p);
    Rng rng(43);
    const long n = 200000;
    double sum_r2 = 0.0, sum_p2 = 0.0;
    for (long i = 0; i < n; ++i) {
        const InitialSample s = draw_initial(bath, p, rng);
        sum_r2 += s.point.R[0] * s.point.R[0];
        sum_p2 += s.point.P[0] * s.point.P[0];
    }
    const double w = bath.freq[0];
    CHECK(sum_r2 / n == doctest::Approx(p.bath_kt / (w * w)).epsilon(0.02));
    CHECK(sum_p2 / n == doctest::Approx(p.bath_kt).epsilon(0.02));
}

#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracle_utils.hpp"
#include "phasemom/errors.hpp"
#include "phasemom/states.hpp"

using namespace phasemom;

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kDeg48 = 48.0 * kPi / 180.0;
}

TEST_CASE("gaussian_to_fock: vacuum") {
    const auto s = gaussian_to_fock(GaussianStateSpec{}, 10);
    CHECK(s.amplitude(0).real() == doctest::Approx(1.0).epsilon(1e-14));
    for (int n = 1; n <= 10; ++n) CHECK(std::abs(s.amplitude(n)) < 1e-14);
}

TEST_CASE("gaussian_to_fock: coherent Poisson amplitudes") {
    const auto spec = GaussianStateSpec::make(2.0, 0.0, 0.0, 0.0);
    const auto s = gaussian_to_fock(spec, 60);
    CHECK(std::norm(s.amplitude(2)) == doctest::Approx(std::exp(-4.0) * 8.0).epsilon(1e-12));
    CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gaussian_to_fock: squeezed vacuum matches the matrix-exponential oracle") {
    const auto spec = GaussianStateSpec::make(0.0, 0.0, 0.5, 0.0);
    const auto s = gaussian_to_fock(spec, 200);
    const auto ref = oracle::displaced_squeezed_expm(0.0, 0.5, 0.0, 200);
    for (int n = 0; n <= 8; ++n) {
        CHECK(s.amplitude(n).real() == doctest::Approx(ref[static_cast<std::size_t>(n)].real())
                                           .epsilon(1e-10));
        if (n % 2 == 1) CHECK(std::abs(s.amplitude(n)) < 1e-14);
    }
}

TEST_CASE("gaussian_to_fock: displaced-squeezed states match the oracle, including 48 degrees") {
    struct Case {
        double mag, phase, r, angle;
    };
    for (const auto& c : {Case{2.0, 0.0, 0.3, 0.0}, Case{2.0, 0.0, 0.3, kPi / 2},
                          Case{2.0, 0.3, 0.3, 0.3 + kDeg48}, Case{1.2, 5.9, 0.25, 1.0}}) {
        const auto spec = GaussianStateSpec::make(c.mag, c.phase, c.r, c.angle);
        const auto s = gaussian_to_fock(spec, 150);
        const auto ref = oracle::displaced_squeezed_expm(spec.alpha(), c.r, c.angle, 150);
        double worst = 0.0;
        for (int n = 0; n <= 150; ++n)
            worst = std::max(worst, std::abs(s.amplitude(n) - ref[static_cast<std::size_t>(n)]));
        INFO("mag=", c.mag, " r=", c.r, " angle=", c.angle);
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("gaussian_to_fock raises TruncationError when the cutoff is too small") {
    const auto spec = GaussianStateSpec::make(3.0, 0.0, 0.0, 0.0);
    CHECK_THROWS_AS(gaussian_to_fock(spec, 8), TruncationError);
}

TEST_CASE("adaptive_fock_cutoff finds the smallest adequate truncation") {
    const auto spec = GaussianStateSpec::make(2.0, 0.0, 0.0, 0.0);
    const int n = adaptive_fock_cutoff(spec);
    CHECK_NOTHROW(gaussian_to_fock(spec, n));
    CHECK_THROWS_AS(gaussian_to_fock(spec, n - 1), TruncationError);
    CHECK(n <= kFockTruncationCap);
}

TEST_CASE("fock_density: outer products") {
    SUBCASE("vacuum") {
        const auto rho = fock_density(gaussian_to_fock(GaussianStateSpec{}, 4));
        CHECK(rho.at(0, 0).real() == doctest::Approx(1.0));
        CHECK(std::abs(rho.at(1, 1)) < 1e-14);
    }
    SUBCASE("single photon") {
        FockState one({complexd(0.0), complexd(1.0)});
        const auto rho = fock_density(one);
        CHECK(rho.at(1, 1).real() == doctest::Approx(1.0));
        CHECK(std::abs(rho.at(0, 0)) < 1e-14);
    }
    SUBCASE("equal superposition of 0 and 1") {
        const double r = 1.0 / std::sqrt(2.0);
        FockState plus({complexd(r), complexd(r)});
        const auto rho = fock_density(plus);
        CHECK(rho.at(0, 1).real() == doctest::Approx(0.5));
        CHECK(rho.at(1, 0).real() == doctest::Approx(0.5));
    }
    SUBCASE("hermiticity by construction") {
        const auto spec = GaussianStateSpec::make(1.0, 0.7, 0.2, 1.3);
        const auto rho = fock_density(gaussian_to_fock(spec, 40));
        for (int m = 0; m <= 40; ++m)
            for (int n = 0; n <= 40; ++n)
                CHECK(rho.at(m, n) == std::conj(rho.at(n, m)));
        CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("quadrature_pdf: Gaussian closed form") {
    SUBCASE("vacuum has mean 0, variance 1/2 at every theta") {
        GaussianStateSpec vac;
        for (double th : {0.0, 1.1, 4.4}) {
            CHECK(vac.quadrature_mean(th) == doctest::Approx(0.0));
            CHECK(vac.quadrature_variance(th) == doctest::Approx(0.5));
        }
    }
    SUBCASE("coherent alpha=2 at theta=0: mean 2 sqrt 2, variance 1/2") {
        const auto c = GaussianStateSpec::make(2.0, 0.0, 0.0, 0.0);
        CHECK(c.quadrature_mean(0.0) == doctest::Approx(2.0 * std::sqrt(2.0)));
        CHECK(c.quadrature_variance(0.0) == doctest::Approx(0.5));
    }
    SUBCASE("squeezed vacuum r=0.5 along the squeeze axis: variance e^{-1}/2") {
        const auto s = GaussianStateSpec::make(0.0, 0.0, 0.5, 0.7);
        CHECK(s.quadrature_variance(0.7) == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-12));
    }
}

TEST_CASE("quadrature_pdf: Fock path agrees with the Gaussian path") {
    // pointwise 1e-6 agreement needs a tighter truncation budget than the
    // default norm deficit of 1e-10 (pdf error scales like its square root)
    const auto spec = GaussianStateSpec::make(1.4, 0.4, 0.3, 1.1);
    const auto fock = gaussian_to_fock(spec, adaptive_fock_cutoff(spec, 1e-14), 1e-14);
    for (double th : {0.0, 0.9, 2.5, 5.1}) {
        for (double x : {-2.7, -0.4, 0.0, 1.3, 3.2}) {
            CHECK(quadrature_pdf(fock, th, x) ==
                  doctest::Approx(quadrature_pdf(spec, th, x)).epsilon(1e-6));
        }
    }
}

TEST_CASE("quadrature_pdf integrates to one (both paths)") {
    const auto spec = GaussianStateSpec::make(1.0, 0.0, 0.4, 0.9);
    const auto fock = gaussian_to_fock(spec, adaptive_fock_cutoff(spec));
    for (double th : {0.3, 2.0}) {
        const double ig = oracle::simpson(
            [&](double x) { return quadrature_pdf(spec, th, x); }, -9.0, 9.0, 3600);
        const double if_ = oracle::simpson(
            [&](double x) { return quadrature_pdf(fock, th, x); }, -9.0, 9.0, 3600);
        CHECK(ig == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(if_ == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("oracle_exponential_moment") {
    SUBCASE("vacuum: all moments vanish") {
        const auto rho = fock_density(gaussian_to_fock(GaussianStateSpec{}, 12));
        for (int k = 1; k <= 6; ++k) CHECK(std::abs(oracle_exponential_moment(rho, k)) < 1e-14);
    }
    SUBCASE("squeezed vacuum: odd moments vanish") {
        const auto spec = GaussianStateSpec::make(0.0, 0.0, 0.5, 0.0);
        const auto rho = fock_density(gaussian_to_fock(spec, 120));
        for (int k = 1; k <= 9; k += 2) CHECK(std::abs(oracle_exponential_moment(rho, k)) < 1e-12);
        CHECK(oracle_exponential_moment(rho, 2).real() ==
              doctest::Approx(-0.335517386842028).epsilon(1e-9));
    }
    SUBCASE("coherent alpha=2: Psi_1 from brute-force Fock sum at n_max=200") {
        const auto spec = GaussianStateSpec::make(2.0, 0.0, 0.0, 0.0);
        const auto rho = fock_density(gaussian_to_fock(spec, 200));
        const auto c = oracle::displaced_squeezed_expm(2.0, 0.0, 0.0, 200);
        const auto want = oracle::exp_moment(c, 1);
        const auto got = oracle_exponential_moment(rho, 1);
        CHECK(got.real() == doctest::Approx(want.real()).epsilon(1e-10));
        CHECK(std::abs(got.imag()) < 1e-12);
        CHECK(got.real() > 0.0);
        CHECK(std::abs(got) < 1.0);
        CHECK(got.real() == doctest::Approx(0.961037863315109).epsilon(1e-10));
    }
    SUBCASE("k < 1 is rejected") {
        const auto rho = fock_density(gaussian_to_fock(GaussianStateSpec{}, 4));
        CHECK_THROWS_AS(oracle_exponential_moment(rho, 0), DomainError);
    }
    SUBCASE("|Psi_k| <= 1 across a state battery") {
        for (double r : {0.0, 0.3, 0.6}) {
            for (double mag : {0.0, 1.0, 2.0}) {
                const auto spec = GaussianStateSpec::make(mag, 0.9, r, 0.2);
                const auto rho = fock_density(gaussian_to_fock(spec, adaptive_fock_cutoff(spec)));
                for (int k = 1; k <= 20; ++k)
                    CHECK(std::abs(oracle_exponential_moment(rho, k)) <= 1.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("oracle_number_moments") {
    SUBCASE("vacuum") {
        const auto m = oracle_number_moments(fock_density(gaussian_to_fock(GaussianStateSpec{}, 8)));
        CHECK(m.mean == doctest::Approx(0.0));
        CHECK(m.second_moment == doctest::Approx(0.0));
    }
    SUBCASE("coherent alpha=2: Poisson") {
        const auto spec = GaussianStateSpec::make(2.0, 0.0, 0.0, 0.0);
        const auto m = oracle_number_moments(fock_density(gaussian_to_fock(spec, 80)));
        CHECK(m.mean == doctest::Approx(4.0).epsilon(1e-10));
        CHECK(m.second_moment - m.mean * m.mean == doctest::Approx(4.0).epsilon(1e-9));
    }
    SUBCASE("squeezed vacuum r=0.5: mean sinh^2 r, second moment by diagonal sum") {
        const auto spec = GaussianStateSpec::make(0.0, 0.0, 0.5, 0.0);
        const auto m = oracle_number_moments(fock_density(gaussian_to_fock(spec, 200)));
        CHECK(m.mean == doctest::Approx(std::sinh(0.5) * std::sinh(0.5)).epsilon(1e-10));
        const auto c = oracle::displaced_squeezed_expm(0.0, 0.5, 0.0, 200);
        double n2 = 0.0;
        for (std::size_t n = 0; n < c.size(); ++n)
            n2 += double(n) * double(n) * std::norm(c[n]);
        CHECK(m.second_moment == doctest::Approx(n2).epsilon(1e-10));
    }
    SUBCASE("<n> = |alpha|^2 + sinh^2 r for displaced-squeezed states") {
        const auto spec = GaussianStateSpec::make(1.7, 0.8, 0.35, 2.0);
        const auto m = oracle_number_moments(fock_density(gaussian_to_fock(spec, 120)));
        CHECK(m.mean ==
              doctest::Approx(1.7 * 1.7 + std::sinh(0.35) * std::sinh(0.35)).epsilon(1e-10));
    }
}

TEST_CASE("phase-averaged quadrature moments tie to number moments") {
    // (2pi)^{-1} int dtheta int dx x^2 p = <n> + 1/2
    // (2pi)^{-1} int dtheta int dx x^4 p = (3/2)(<n^2> + <n> + 1/2)
    const auto spec = GaussianStateSpec::make(1.5, 0.5, 0.3, 1.2);
    const auto m = oracle_number_moments(fock_density(gaussian_to_fock(spec, 100)));
    const int n_th = 256;
    double x2 = 0.0, x4 = 0.0;
    for (int j = 0; j < n_th; ++j) {
        const double th = (j + 0.5) * 2.0 * kPi / n_th;
        x2 += oracle::simpson([&](double x) { return x * x * quadrature_pdf(spec, th, x); },
                              -10.0, 10.0, 4000);
        x4 += oracle::simpson(
            [&](double x) { return x * x * x * x * quadrature_pdf(spec, th, x); }, -10.0,
            10.0, 4000);
    }
    x2 /= n_th;
    x4 /= n_th;
    CHECK(x2 == doctest::Approx(m.mean + 0.5).epsilon(1e-6));
    CHECK(x4 == doctest::Approx(1.5 * (m.second_moment + m.mean + 0.5)).epsilon(1e-6));
}

TEST_CASE("rotating a state multiplies Psi_k by e^{i k delta}") {
    const double delta = 0.83;
    const auto base = GaussianStateSpec::make(1.6, 0.4, 0.3, 1.0);
    const auto rot = GaussianStateSpec::make(1.6, 0.4 + delta, 0.3, 1.0 + delta);
    const auto rho0 = fock_density(gaussian_to_fock(base, 120));
    const auto rho1 = fock_density(gaussian_to_fock(rot, 120));
    for (int k = 1; k <= 8; ++k) {
        const auto want = oracle_exponential_moment(rho0, k) * std::polar(1.0, k * delta);
        const auto got = oracle_exponential_moment(rho1, k);
        CHECK(std::abs(got - want) < 1e-8);
    }
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(GaussianStateSpec::make(-0.1, 0, 0, 0), DomainError);
    CHECK_THROWS_AS(GaussianStateSpec::make(0, 0, -0.2, 0), DomainError);
    const auto s = GaussianStateSpec::make(1.0, 7.0, 0.1, -1.0);
    CHECK(s.alpha_phase == doctest::Approx(7.0 - 2 * kPi));
    CHECK(s.squeeze_angle == doctest::Approx(2 * kPi - 1.0));
}

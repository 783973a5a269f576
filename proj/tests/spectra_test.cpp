#include "abtrace/errors.hpp"
#include "abtrace/gauge.hpp"
#include "abtrace/spectra.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace abtrace;
using namespace abtrace::spectra;

namespace {

double sph_j(double x) { return std::sqrt(2.0 / (kPi * x)) * (std::sin(x) / x - std::cos(x)); }  // J_{3/2}
double sph_y(double x) { return -std::sqrt(2.0 / (kPi * x)) * (std::cos(x) / x + std::sin(x)); } // Y_{3/2}

} // namespace

TEST_CASE("Bessel J agrees with the power series") {
    for (double nu : {0.0, 0.3, 1.5, 7.25})
        for (double x : {0.5, 3.0, 11.0, 19.0}) {
            const double ref = oracle::bessel_j_series(nu, x);
            CHECK(std::abs(bessel_j(nu, x) - ref) <= 1e-11 * std::max(1.0, std::abs(ref)));
        }
    CHECK(bessel_y(1.5, 2.0) == doctest::Approx(sph_y(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(bessel_j(401.0, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_y(0.5, 0.0), DomainError);
}

TEST_CASE("Bessel zeros: first zero of J_0, half-integer order, and a complete scan") {
    const auto z0 = bessel_j_zeros(0.0, 10.0);
    REQUIRE(z0.size() == 3);
    CHECK(z0[0] == doctest::Approx(2.404825557695773).epsilon(1e-14));

    const auto half = bessel_j_zeros(0.5, 100.0);
    REQUIRE(half.size() == 31);
    for (std::size_t n = 0; n < half.size(); ++n) CHECK(std::abs(half[n] - (n + 1) * kPi) <= 1e-12 * (n + 1));

    for (double nu : {0.37, 2.0, 6.6}) {
        const auto got = bessel_j_zeros(nu, 20.0);
        const auto want = oracle::scan_roots([nu](double x) { return oracle::bessel_j_series(nu, x); }, 1e-3, 20.0, 1e-3);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-11));
    }
}

TEST_CASE("annulus zeros against closed-form half-integer orders") {
    const auto half = annulus_zeros(0.5, 0.5, 1.0, 60.0);
    REQUIRE(half.size() == 9);
    for (std::size_t n = 0; n < half.size(); ++n) CHECK(std::abs(half[n] - 2.0 * (n + 1) * kPi) <= 1e-10);

    const double r0 = 0.3, R = 1.2;
    const auto got = annulus_zeros(1.5, r0, R, 40.0);
    const auto want = oracle::scan_roots(
        [&](double k) { return sph_j(k * r0) * sph_y(k * R) - sph_j(k * R) * sph_y(k * r0); }, 0.05, 40.0, 1e-3);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-10));
}

TEST_CASE("flux offset canonicalization") {
    const auto a = flux_offset(0.3 * kPi);
    CHECK(a.shift == 0);
    CHECK(a.g == doctest::Approx(0.15));
    const auto b = flux_offset(0.3 * kPi + 2 * kPi);
    CHECK(b.shift == 1);
    CHECK(b.g == a.g);
    CHECK(flux_offset(-0.3 * kPi).g == -a.g);
    CHECK_THROWS_AS(flux_offset(2 * kPi * 2e5), DomainError);
}

TEST_CASE("disk spectrum: ground state and completeness against the series oracle") {
    const auto s = disk_flux_spectrum({1.0, 0.0, 0.0, 0.0}, 15.0);
    REQUIRE(s.complete);
    CHECK(s.modes.front().lambda == doctest::Approx(5.783185962946784).epsilon(1e-13));
    std::size_t count = 0;
    for (int m = -15; m <= 15; ++m) {
        const double nu = std::abs(m);
        count += oracle::scan_roots([nu](double x) { return oracle::bessel_j_series(nu, x); }, 1e-3, 15.0, 1e-3).size();
    }
    CHECK(s.modes.size() == count);
    for (std::size_t i = 1; i < s.modes.size(); ++i) CHECK(s.modes[i - 1].lambda <= s.modes[i].lambda);
    for (const auto& m : s.modes) CHECK(m.k * m.k == doctest::Approx(m.lambda));
}

TEST_CASE("half-flux disk has lowest eigenvalue pi^2, doubly degenerate") {
    const auto s = disk_flux_spectrum({1.0, 0.0, kPi, 0.0}, 10.0);
    REQUIRE(s.modes.size() >= 2);
    CHECK(s.modes[0].lambda == doctest::Approx(kPi * kPi).epsilon(1e-13));
    CHECK(s.modes[1].lambda == s.modes[0].lambda);
}

TEST_CASE("flux symmetries are exact") {
    for (double a : {0.3 * kPi, 0.7 * kPi, 1.9}) {
        const auto base = disk_flux_spectrum({1.0, 0.0, a, 0.0}, 30.0).eigenvalues();
        CHECK(disk_flux_spectrum({1.0, 0.0, -a, 0.0}, 30.0).eigenvalues() == base);
        CHECK(disk_flux_spectrum({1.0, 0.0, a + 2 * kPi, 0.0}, 30.0).eigenvalues() == base);
    }
}

TEST_CASE("spectrum does not depend on the thread count") {
    const auto one = disk_flux_spectrum({1.0, 0.0, 0.4, 0.0}, 40.0, 1).eigenvalues();
    const auto many = disk_flux_spectrum({1.0, 0.0, 0.4, 0.0}, 40.0, 5).eigenvalues();
    CHECK(one == many);
}

TEST_CASE("Weyl count at K = 100") {
    const auto s = disk_flux_spectrum({1.0, 0.0, 0.0, 0.0}, 100.0, 4);
    const double weyl = 100.0 * 100.0 * kPi / (4 * kPi);
    CHECK(std::abs(double(s.modes.size()) - weyl) / weyl < 0.03);
}

TEST_CASE("annulus spectrum: the nu = 1/2 channel at half flux") {
    const auto s = annulus_flux_spectrum({1.0, 0.5, kPi, 0.0}, 30.0);
    int found = 0;
    for (const auto& m : s.modes)
        if (m.nu == 0.5) {
            CHECK(m.k == doctest::Approx(2.0 * m.n * kPi).epsilon(1e-12));
            ++found;
        }
    CHECK(found == 2 * 4); // m = 0 and m = -1, n = 1..4
    CHECK_THROWS_AS(disk_flux_spectrum({1.0, 0.5, 0.0, 0.0}, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(annulus_flux_spectrum({1.0, 0.0, 0.0, 0.0}, 10.0), std::invalid_argument);
}

TEST_CASE("finite-difference oracle matches the Bessel solver") {
    for (double a : {0.0, 0.3 * kPi}) {
        const DiskFluxProblem p{1.0, 0.0, a, 0.0};
        const auto exact = disk_flux_spectrum(p, 12.0).eigenvalues();
        const auto fd = fd_oracle_spectrum(p, {}, 10);
        REQUIRE(fd.size() == 10);
        for (int i = 0; i < 10; ++i) CHECK(std::abs(fd[i] - exact[i]) / exact[i] < 0.005);
    }
    const DiskFluxProblem ann{1.0, 0.5, kPi, 0.0};
    const auto exact = annulus_flux_spectrum(ann, 25.0).eigenvalues();
    const auto fd = fd_oracle_spectrum(ann, {}, 6);
    for (int i = 0; i < 6; ++i) CHECK(std::abs(fd[i] - exact[i]) / exact[i] < 0.005);
}

TEST_CASE("square torus: first nonzero eigenvalue 4 pi^2 with multiplicity 4") {
    const Lattice sq{Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
    const auto s = torus_spectrum({sq, Vec2::Zero()}, 20.0);
    REQUIRE(s.modes.size() > 5);
    CHECK(s.modes[0].lambda == 0.0);
    for (int i = 1; i <= 4; ++i) CHECK(s.modes[i].lambda == doctest::Approx(4 * kPi * kPi).epsilon(1e-14));
    CHECK(s.modes[5].lambda > 4 * kPi * kPi + 1.0);
}

TEST_CASE("torus spectrum is invariant under A0 -> A0 + 2 pi delta*") {
    const Lattice l{Vec2(1.0, 0.0), Vec2(0.31, 1.07)};
    const Vec2 a0 = 0.8 * l.dual_basis()[0] + 0.3 * l.dual_basis()[1];
    auto a = torus_spectrum({l, a0}, 40.0).eigenvalues();
    auto b = torus_spectrum({l, a0 + 2 * kPi * l.dual_point(1, -2)}, 40.0).eigenvalues();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-9 * std::max(1.0, a[i]));
}

TEST_CASE("lattice genericity") {
    const auto skew = lattice_genericity({Vec2(1.0, 0.0), Vec2(0.31, 1.07)}, 10.0);
    CHECK(skew.pass);
    CHECK(skew.vectors_checked > 100);
    const auto sq = lattice_genericity({Vec2(1.0, 0.0), Vec2(0.0, 1.0)}, 3.0);
    CHECK_FALSE(sq.pass);
    REQUIRE(sq.witness);
    CHECK((*sq.witness)[0] == std::array<long, 2>{1, 0});
    CHECK((*sq.witness)[1] == std::array<long, 2>{0, 1});
}

TEST_CASE("periodic curl-free potentials reduce to a constant") {
    const Lattice l{Vec2(1.0, 0.0), Vec2(0.31, 1.07)};
    const Vec2 delta = l.dual_point(2, -1);
    FourierPeriodic f{l, Vec2(0.25, -0.5), {FourierMode{2, -1, (Complex(0.4, -0.1) * delta.cast<Complex>()).eval()}}};
    const auto red = reduce_to_constant_gauge(f);
    CHECK((red.a0 - Vec2(0.25, -0.5)).norm() < 1e-15);
    for (const Vec2& x : {Vec2(0.1, 0.2), Vec2(-0.7, 0.33)}) {
        const Vec2 want = potential(GaugeField(f), x);
        CHECK((red.a0 + red.phase_gradient(l, x) - want).norm() < 1e-12);
    }
    f.modes[0].coefficient = (Complex(0.4, 0.0) * perp(delta).cast<Complex>()).eval();
    CHECK_THROWS_AS(reduce_to_constant_gauge(f), NotCurlFree);
}

TEST_CASE("spectrum CSV layout") {
    const auto s = disk_flux_spectrum({1.0, 0.0, 0.0, 0.0}, 3.0);
    std::ostringstream os;
    write_spectrum_csv(os, s, {"hello"});
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "# hello");
    std::getline(in, line);
    CHECK(line.rfind("# cutoff=3", 0) == 0);
    std::getline(in, line);
    CHECK(line == "lambda,k,m,nu,n");
    std::getline(in, line);
    CHECK(line == "5.7831859629467832,2.4048255576957724,0,0,1");
}

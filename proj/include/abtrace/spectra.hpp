#pragma once

// Eigenvalues of H = (i grad + A)^2 with Dirichlet conditions on the flux disk
// and annulus, the finite-difference cross-check, and flat tori with a
// zero-field periodic potential.

#include "abtrace/gauge.hpp"
#include "abtrace/lattice.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace abtrace::spectra {

struct BesselLimits {
    double nu_max = 400.0;
    double x_max = 400.0;
};

/// J_nu(x) for 0 <= nu <= nu_max, 0 <= x <= x_max; DomainError outside.
double bessel_j(double nu, double x, const BesselLimits& limits = {});
/// Y_nu(x) for x > 0; -infinity when it overflows.
double bessel_y(double nu, double x, const BesselLimits& limits = {});

/// All positive zeros of J_nu up to k_max, ascending, to absolute 1e-10.
/// Completeness rests on a unit-step sign scan (zeros are more than 2 apart)
/// plus a check that J_{nu+1} alternates in sign across the found zeros.
std::vector<double> bessel_j_zeros(double nu, double k_max, const BesselLimits& limits = {});

/// Zeros of J_nu(k r0) Y_nu(k R) - J_nu(k R) Y_nu(k r0) in k, up to k_max.
std::vector<double> annulus_zeros(double nu, double r0, double radius, double k_max,
                                  const BesselLimits& limits = {});

/// Flux alpha split as m + alpha / 2pi = j + g with |g| <= 1/2, alpha / 2pi
/// first rounded to a multiple of 2^-36. The orders nu = |j + g| are then
/// exactly invariant under alpha -> -alpha and alpha -> alpha + 2 pi.
struct FluxOffset {
    long shift; ///< m = j - shift
    double g;
};
FluxOffset flux_offset(double alpha);

enum class ProblemKind { disk, annulus, torus };

struct DiskFluxProblem {
    double radius = 1.0;
    double inner_radius = 0.0;
    double alpha = 0.0;
    /// Scalar potential; only V = 0 is implemented.
    double potential = 0.0;

    void validate() const;
};

struct Mode {
    double lambda = 0.0;
    double k = 0.0;
    long m = 0;   ///< angular index (disk, annulus)
    double nu = 0.0;
    int n = 0;    ///< zero index, from 1
    long d1 = 0;  ///< dual-lattice coordinates (torus)
    long d2 = 0;
};

struct Spectrum {
    ProblemKind kind = ProblemKind::disk;
    std::vector<Mode> modes; ///< ascending in lambda
    double cutoff = 0.0;     ///< every eigenvalue with k <= cutoff is present
    bool complete = false;

    std::vector<double> frequencies() const;
    std::vector<double> eigenvalues() const;
};

/// Eigenvalues with k <= cutoff; `threads` only affects speed.
Spectrum disk_flux_spectrum(const DiskFluxProblem& problem, double cutoff, int threads = 1);
Spectrum annulus_flux_spectrum(const DiskFluxProblem& problem, double cutoff, int threads = 1);

struct FdGrid {
    int radial = 400;
    int angular = 256;
};

/// Lowest `count` eigenvalues from a polar finite-volume discretization. The
/// gauge phase enters the angular DFT; each angular block is solved as a
/// symmetric tridiagonal problem. Used only to cross-check the Bessel solver.
std::vector<double> fd_oracle_spectrum(const DiskFluxProblem& problem, const FdGrid& grid = {},
                                       int count = 20);

struct TorusProblem {
    Lattice lattice;
    Vec2 a0 = Vec2::Zero();
};

/// lambda = |2 pi delta - A0|^2 over delta in L* with sqrt(lambda) <= cutoff.
Spectrum torus_spectrum(const TorusProblem& problem, double cutoff);

struct GenericityReport {
    bool pass = true;
    std::size_t vectors_checked = 0;
    /// Integer coordinates of two lattice vectors with equal length and d' != +-d.
    std::optional<std::array<std::array<long, 2>, 2>> witness;
};

GenericityReport lattice_genericity(const Lattice& lattice, double bound);

struct PhaseMode {
    long d1 = 0;
    long d2 = 0;
    Complex coefficient; ///< phi = sum of Re(coefficient exp(2 pi i delta . x))
};

struct GaugeReduction {
    Vec2 a0 = Vec2::Zero();
    std::vector<PhaseMode> phi;

    double phase(const Lattice& lattice, const Vec2& x) const;
    Vec2 phase_gradient(const Lattice& lattice, const Vec2& x) const;
};

/// Writes A = A0 + grad phi with phi mean-zero. Throws NotCurlFree if some
/// A_delta is not parallel to delta (to 1e-10).
GaugeReduction reduce_to_constant_gauge(const FourierPeriodic& field);

/// CSV with '#' header lines, then columns (lambda,k,m,nu,n) or, for a
/// torus, (lambda,delta1,delta2) with integer dual-lattice coordinates.
void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum,
                        const std::vector<std::string>& header = {});

} // namespace abtrace::spectra

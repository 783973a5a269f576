#pragma once

// Band-limited wave traces, closed-form singularity predictions, their
// band-limited models, and least-squares extraction of the leading coefficient.

#include "abtrace/beams.hpp"
#include "abtrace/billiards.hpp"
#include "abtrace/lattice.hpp"
#include "abtrace/spectra.hpp"

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace abtrace::trace {

using beams::Side;

/// 1 on [0, 1/2], cos^2(pi (s - 1/2)) on [1/2, 1], 0 beyond.
double window_profile(double s);

struct WindowSpec {
    double cutoff = 80.0; ///< K
    double weight(double k) const { return window_profile(k / cutoff); }
};

struct TimeGrid {
    double start = 0.0;
    double step = 0.0;
    std::size_t count = 0;

    double at(std::size_t i) const { return start + step * static_cast<double>(i); }
    std::vector<double> times() const;
    /// Samples center + j step for |j step| <= half_width.
    static TimeGrid centered(double center, double half_width, double step);
    /// The default spacing pi / (4K).
    static double default_step(const WindowSpec& w) { return kPi / (4.0 * w.cutoff); }
};

struct TraceSamples {
    TimeGrid grid;
    std::vector<double> values;
    WindowSpec window;
    std::size_t modes = 0;
    /// T(0) = sum of window weights; bounds every |value|.
    double weight_sum = 0.0;
};

/// T(t) = sum_j chi(k_j / K) cos(t k_j), with Neumaier summation in the
/// given mode order. Parallel over time samples, so results do not depend
/// on `threads`.
TraceSamples bandlimited_trace(std::span<const double> frequencies, const WindowSpec& window,
                               const TimeGrid& grid, int threads = 1);

/// As above; throws IncompleteSpectrum unless the spectrum is complete up to K.
TraceSamples bandlimited_trace(const spectra::Spectrum& spectrum, const WindowSpec& window,
                               const TimeGrid& grid, int threads = 1);

struct SingularityPrediction {
    int sides = 3;
    double radius = 1.0;
    double length = 0.0;
    double flux = 0.0;
    /// prefactor * 2^{-5/2} h_N^{3/2} N^{-1/2} cos(flux).
    double coefficient = 0.0;
    Side side = Side::plus;
    int prefactor = 1;
};

/// Leading term prefactor * C(N, flux) (t - L)_{+/-}^{-3/2} for the inscribed
/// N-gon: odd N sit on the plus side with (-1)^{(N-1)/2}, even N on the minus
/// side with (-1)^{N/2-1}.
SingularityPrediction predict_singularity(int sides, double radius, double flux);

/// B(s) = integral over r > 0 of chi(r/K) r^{1/2} exp(-i s r) dr, adaptive
/// Gauss-Kronrod to 1e-9. Throws QuadratureFailure.
Complex frequency_integral(double s, const WindowSpec& window);

/// Band-limited (t - L)_{+/-}^{-3/2} with unit coefficient.
std::vector<double> model_shape(Side side, double length, const WindowSpec& window,
                                std::span<const double> times);

/// prediction.coefficient times model_shape.
std::vector<double> bandlimited_model(const SingularityPrediction& prediction, const WindowSpec& window,
                                      std::span<const double> times);

struct IsolationReport {
    bool pass = true;
    /// Closest other length or band edge; NaN when none is known.
    double nearest = 0.0;
    double distance = 0.0;
    std::string description;
};

IsolationReport verify_isolation(const billiards::LengthSpectrum& lengths, double length, double half_width);
IsolationReport verify_isolation(std::span<const double> lengths, double length, double half_width);

struct FitOptions {
    /// Unset: 0.3 when the orbit is isolated at that width, otherwise half
    /// the distance to the nearest competing length.
    std::optional<double> half_width;
    int background_degree = 1;
    /// Fit this side instead of the predicted one.
    std::optional<Side> side;
};

struct FitResult {
    double c_hat = 0.0;
    double c_pred = 0.0;
    /// ||trace - fit|| / ||trace|| over the window.
    double residual = 0.0;
    Side side = Side::plus;
    std::vector<double> background;
    std::size_t samples = 0;
    IsolationReport isolation;
};

/// Least squares of the trace samples within `half_width` of L against the
/// band-limited model and a polynomial background in (t - L). Throws
/// IsolationViolation if another length is within the window and
/// std::invalid_argument if half_width exceeds 0.35.
FitResult fit_amplitude(const TraceSamples& trace, const SingularityPrediction& prediction,
                        const IsolationReport& isolation, const FitOptions& options = {});

/// fit_amplitude with isolation taken from the enumerated length spectrum of
/// the disk (or annulus, if inner_radius > 0) of the prediction's radius.
FitResult fit_disk_orbit(const TraceSamples& trace, const SingularityPrediction& prediction,
                         const FitOptions& options = {}, double inner_radius = 0.0);

struct TorusPeak {
    long m1 = 0;
    long m2 = 0;
    double length = 0.0;
    double weight = 0.0;
    double residual = 0.0;
    double half_width = 0.0;
};

struct TorusFitOptions {
    /// Window half-width; by default half the gap to the nearest other length, at most 0.3.
    std::optional<double> half_width;
    int background_degree = 1;
};

/// Fits the band-limited singularity shape at t = |d| for each lattice
/// vector d (integer coordinates) and reports its weight. The trace must
/// cover each window. Throws GenericityFailure if the lattice fails the
/// genericity check up to max |d| + 1 and IsolationViolation if a window
/// contains another lattice length.
std::vector<TorusPeak> torus_peak_weights(const TraceSamples& trace, const Lattice& lattice,
                                          std::span<const std::array<long, 2>> vectors,
                                          const TorusFitOptions& options = {});

void write_trace_csv(std::ostream& os, const TraceSamples& trace, const std::vector<std::string>& header = {});

} // namespace abtrace::trace

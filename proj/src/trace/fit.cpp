#include "abtrace/csv.hpp"
#include "abtrace/errors.hpp"
#include "abtrace/trace.hpp"

#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace abtrace::trace {

namespace {

constexpr double kSameLength = 1e-9;

void consider(IsolationReport& r, double distance, double where, const std::string& what) {
    if (distance < r.distance) {
        r.distance = distance;
        r.nearest = where;
        r.description = what;
    }
}

IsolationReport empty_report() {
    IsolationReport r;
    r.nearest = std::numeric_limits<double>::quiet_NaN();
    r.distance = std::numeric_limits<double>::infinity();
    r.description = "none";
    return r;
}

} // namespace

IsolationReport verify_isolation(const billiards::LengthSpectrum& lengths, double length, double half_width) {
    IsolationReport r = empty_report();
    for (const auto& e : lengths.entries) {
        const double d = std::abs(e.length - length);
        if (d <= kSameLength) continue;
        std::ostringstream os;
        os << e.sides << "-gon q=" << e.winding << " at " << format_double(e.length);
        consider(r, d, e.length, os.str());
    }
    for (const auto& b : lengths.bands) {
        const double d = std::max({0.0, b.lower - length, length - b.upper});
        std::ostringstream os;
        os << (b.kind == billiards::LengthBand::Kind::obstacle ? "obstacle band k=" : "whispering tail q=")
           << b.index << " [" << format_double(b.lower) << ", " << format_double(b.upper) << "]";
        consider(r, d, length < b.lower ? b.lower : b.upper, os.str());
    }
    r.pass = r.distance > half_width;
    return r;
}

IsolationReport verify_isolation(std::span<const double> lengths, double length, double half_width) {
    IsolationReport r = empty_report();
    for (double l : lengths) {
        const double d = std::abs(l - length);
        if (d <= kSameLength) continue;
        consider(r, d, l, "length " + format_double(l));
    }
    r.pass = r.distance > half_width;
    return r;
}

FitResult fit_amplitude(const TraceSamples& trace, const SingularityPrediction& prediction,
                        const IsolationReport& isolation, const FitOptions& options) {
    const double hw = options.half_width.value_or(isolation.distance > 0.3 ? 0.3 : 0.5 * isolation.distance);
    if (!(hw > 0.0 && hw <= 0.35)) throw std::invalid_argument("fit half-width must lie in (0, 0.35]");
    if (options.background_degree < 0) throw std::invalid_argument("background degree must be >= 0");
    if (!(isolation.distance > hw)) {
        std::ostringstream os;
        os << isolation.description << " lies within " << hw << " of L=" << prediction.length;
        throw IsolationViolation(os.str());
    }

    std::vector<double> times;
    std::vector<double> values;
    for (std::size_t i = 0; i < trace.values.size(); ++i) {
        const double t = trace.grid.at(i);
        if (std::abs(t - prediction.length) <= hw * (1.0 + 1e-12)) {
            times.push_back(t);
            values.push_back(trace.values[i]);
        }
    }
    const int cols = options.background_degree + 2;
    if (static_cast<int>(times.size()) < cols + 2)
        throw std::invalid_argument("trace grid has too few samples in the fit window");

    FitResult out;
    out.side = options.side.value_or(prediction.side);
    out.c_pred = prediction.coefficient;
    out.samples = times.size();
    out.isolation = isolation;

    const std::vector<double> shape = model_shape(out.side, prediction.length, trace.window, times);
    const auto n = static_cast<Eigen::Index>(times.size());
    Eigen::MatrixXd a(n, cols);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i, 0) = shape[i];
        double p = 1.0;
        for (int d = 0; d <= options.background_degree; ++d) {
            a(i, d + 1) = p;
            p *= times[i] - prediction.length;
        }
        y(i) = values[i];
    }
    const Eigen::VectorXd x = a.colPivHouseholderQr().solve(y);
    out.c_hat = x(0);
    out.background.assign(x.data() + 1, x.data() + x.size());
    const double ny = y.norm();
    out.residual = ny > 0.0 ? (y - a * x).norm() / ny : 0.0;
    return out;
}

FitResult fit_disk_orbit(const TraceSamples& trace, const SingularityPrediction& prediction,
                         const FitOptions& options, double inner_radius) {
    const auto lengths =
        billiards::length_spectrum(billiards::Geometry{prediction.radius, inner_radius}, prediction.length + 1.0);
    const double hw = options.half_width.value_or(0.3);
    return fit_amplitude(trace, prediction, verify_isolation(lengths, prediction.length, hw), options);
}

} // namespace abtrace::trace

#include "abtrace/csv.hpp"
#include "abtrace/errors.hpp"
#include "abtrace/parallel.hpp"
#include "abtrace/trace.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace abtrace::trace {

double window_profile(double s) {
    if (s <= 0.5) return 1.0;
    if (s >= 1.0) return 0.0;
    const double c = std::cos(kPi * (s - 0.5));
    return c * c;
}

std::vector<double> TimeGrid::times() const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = at(i);
    return out;
}

TimeGrid TimeGrid::centered(double center, double half_width, double step) {
    if (!(step > 0.0) || !(half_width >= 0.0)) throw std::invalid_argument("TimeGrid: need step > 0, half_width >= 0");
    const auto n = static_cast<std::size_t>(std::floor(half_width / step + 1e-9));
    return {center - static_cast<double>(n) * step, step, 2 * n + 1};
}

TraceSamples bandlimited_trace(std::span<const double> frequencies, const WindowSpec& window,
                               const TimeGrid& grid, int threads) {
    if (!(window.cutoff > 0.0)) throw std::invalid_argument("window cutoff must be positive");
    std::vector<double> ks;
    std::vector<double> ws;
    for (double k : frequencies) {
        const double w = window.weight(k);
        if (w > 0.0) {
            ks.push_back(k);
            ws.push_back(w);
        }
    }

    TraceSamples out;
    out.grid = grid;
    out.window = window;
    out.modes = ks.size();
    out.values.assign(grid.count, 0.0);
    for (double w : ws) out.weight_sum += w;

    parallel_for(grid.count, threads, [&](std::size_t i) {
        const double t = grid.at(i);
        double sum = 0.0;
        double comp = 0.0;
        for (std::size_t j = 0; j < ks.size(); ++j) {
            const double x = ws[j] * std::cos(t * ks[j]);
            const double s = sum + x;
            comp += std::abs(sum) >= std::abs(x) ? (sum - s) + x : (x - s) + sum;
            sum = s;
        }
        out.values[i] = sum + comp;
    });
    return out;
}

TraceSamples bandlimited_trace(const spectra::Spectrum& spectrum, const WindowSpec& window,
                               const TimeGrid& grid, int threads) {
    if (!spectrum.complete || spectrum.cutoff < window.cutoff) {
        std::ostringstream os;
        os << "spectrum complete only to k=" << spectrum.cutoff << ", window needs " << window.cutoff;
        throw IncompleteSpectrum(os.str());
    }
    return bandlimited_trace(spectrum.frequencies(), window, grid, threads);
}

void write_trace_csv(std::ostream& os, const TraceSamples& trace, const std::vector<std::string>& header) {
    write_comment_header(os, header);
    os << "# K=" << format_double(trace.window.cutoff) << " modes=" << trace.modes
       << " weight_sum=" << format_double(trace.weight_sum) << '\n';
    os << "t,value\n";
    for (std::size_t i = 0; i < trace.values.size(); ++i)
        os << format_double(trace.grid.at(i)) << ',' << format_double(trace.values[i]) << '\n';
}

} // namespace abtrace::trace

#include "abtrace/csv.hpp"
#include "abtrace/spectra.hpp"

namespace abtrace::spectra {

void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum, const std::vector<std::string>& header) {
    write_comment_header(os, header);
    os << "# cutoff=" << format_double(spectrum.cutoff) << " complete=" << (spectrum.complete ? "true" : "false")
       << " modes=" << spectrum.modes.size() << '\n';
    if (spectrum.kind == ProblemKind::torus) {
        os << "lambda,delta1,delta2\n";
        for (const auto& m : spectrum.modes) os << format_double(m.lambda) << ',' << m.d1 << ',' << m.d2 << '\n';
    } else {
        os << "lambda,k,m,nu,n\n";
        for (const auto& m : spectrum.modes)
            os << format_double(m.lambda) << ',' << format_double(m.k) << ',' << m.m << ','
               << format_double(m.nu) << ',' << m.n << '\n';
    }
}

} // namespace abtrace::spectra

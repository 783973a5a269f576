#include "abtrace/acceptance.hpp"
#include "abtrace/beams.hpp"
#include "abtrace/billiards.hpp"
#include "abtrace/cli.hpp"
#include "abtrace/csv.hpp"
#include "abtrace/errors.hpp"
#include "abtrace/spectra.hpp"
#include "abtrace/trace.hpp"

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

namespace abtrace::cli {

namespace {

using nlohmann::json;

constexpr double kTraceHalfWidth = 0.35;

/// Everything a command produces. Files are only written once the whole
/// command has succeeded.
struct Outputs {
    std::map<std::string, std::string> files;
    std::ostringstream stdout_text;
    bool failed = false; // acceptance failure
};

std::vector<std::string> header(const ExperimentConfig& c, const std::string& command) {
    return {std::string("abtrace ") + kVersion, "command=" + command, "config_hash=" + config_hash(c),
            "config=" + c.experiment_json().dump()};
}

std::string indexed(const std::string& stem, std::size_t i, std::size_t n) {
    return n == 1 ? stem + ".csv" : stem + "_" + std::to_string(i) + ".csv";
}

const char* side_name(trace::Side s) { return s == trace::Side::plus ? "plus" : "minus"; }

std::string num(double x) { return format_double(x); }

Lattice lattice_of(const ExperimentConfig& c) {
    Lattice l{c.e1, c.e2};
    l.validate();
    return l;
}

/// Torus flux is A0 = alpha e1*, so that A0 . (m1 e1 + m2 e2) = alpha m1.
Vec2 torus_a0(const ExperimentConfig& c, double alpha) { return alpha * lattice_of(c).dual_basis()[0]; }

spectra::Spectrum compute_spectrum(const ExperimentConfig& c, double alpha, double cutoff) {
    if (c.problem == "torus") return spectra::torus_spectrum({lattice_of(c), torus_a0(c, alpha)}, cutoff);
    if (c.problem == "annulus")
        return spectra::annulus_flux_spectrum({c.radius, c.inner_radius, alpha, 0.0}, cutoff, c.threads);
    return spectra::disk_flux_spectrum({c.radius, 0.0, alpha, 0.0}, cutoff, c.threads);
}

double torus_length(const ExperimentConfig& c, const std::array<long, 2>& d) {
    return lattice_of(c).point(d[0], d[1]).norm();
}

/// Centre of the default trace window: the N-gon length, or |d| for the first torus vector.
double default_center(const ExperimentConfig& c) {
    if (c.problem == "torus") return torus_length(c, c.torus_vectors.front());
    return billiards::OrbitSpec{c.ngon, c.radius}.length();
}

trace::TimeGrid trace_grid(const ExperimentConfig& c, double lo, double hi) {
    const trace::WindowSpec window{c.cutoff};
    const double step = c.t_step.value_or(trace::TimeGrid::default_step(window));
    const double start = c.t_min.value_or(lo);
    const double stop = c.t_max.value_or(hi);
    if (!(stop > start)) throw ConfigError("trace window is empty");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 50'000'000) throw ConfigError("trace grid has too many samples");
    return {start, step, count};
}

trace::TraceSamples sample_trace(const ExperimentConfig& c, double alpha, const trace::TimeGrid& grid) {
    const auto spectrum = compute_spectrum(c, alpha, c.cutoff);
    return trace::bandlimited_trace(spectrum, trace::WindowSpec{c.cutoff}, grid, c.threads);
}

void cmd_spectrum(const ExperimentConfig& c, Outputs& out) {
    const auto hdr = header(c, "spectrum");
    for (std::size_t i = 0; i < c.alpha.size(); ++i) {
        const auto s = compute_spectrum(c, c.alpha[i], c.cutoff);
        std::ostringstream os;
        auto h = hdr;
        h.push_back("alpha=" + num(c.alpha[i]));
        spectra::write_spectrum_csv(os, s, h);
        const auto name = indexed("spectrum", i, c.alpha.size());
        out.files[name] = os.str();
        out.stdout_text << name << ": alpha=" << num(c.alpha[i]) << " modes=" << s.modes.size();
        if (!s.modes.empty()) out.stdout_text << " lambda_1=" << num(s.modes.front().lambda);
        out.stdout_text << '\n';
    }
}

void cmd_trace(const ExperimentConfig& c, Outputs& out) {
    const double center = default_center(c);
    const auto grid = trace_grid(c, center - kTraceHalfWidth, center + kTraceHalfWidth);
    const auto hdr = header(c, "trace");
    for (std::size_t i = 0; i < c.alpha.size(); ++i) {
        const auto samples = sample_trace(c, c.alpha[i], grid);
        std::ostringstream os;
        auto h = hdr;
        h.push_back("alpha=" + num(c.alpha[i]));
        trace::write_trace_csv(os, samples, h);
        const auto name = indexed("trace", i, c.alpha.size());
        out.files[name] = os.str();
        out.stdout_text << name << ": alpha=" << num(c.alpha[i]) << " samples=" << samples.values.size()
                        << " modes=" << samples.modes << '\n';
    }
}

void cmd_predict(const ExperimentConfig& c, Outputs& out) {
    std::ostringstream os;
    write_comment_header(os, header(c, "predict"));
    if (c.problem == "torus") {
        os << "alpha,m1,m2,length,flux,cos_flux\n";
        for (double a : c.alpha)
            for (const auto& d : c.torus_vectors) {
                const double flux = torus_a0(c, a).dot(lattice_of(c).point(d[0], d[1]));
                os << num(a) << ',' << d[0] << ',' << d[1] << ',' << num(torus_length(c, d)) << ',' << num(flux)
                   << ',' << num(std::cos(flux)) << '\n';
                out.stdout_text << "alpha=" << num(a) << " d=(" << d[0] << "," << d[1]
                                << ") relative weight cos(A0.d)=" << num(std::cos(flux)) << '\n';
            }
    } else {
        os << "alpha,sides,radius,length,side,prefactor,coefficient\n";
        for (double a : c.alpha) {
            const auto p = trace::predict_singularity(c.ngon, c.radius, a);
            os << num(a) << ',' << p.sides << ',' << num(p.radius) << ',' << num(p.length) << ','
               << side_name(p.side) << ',' << p.prefactor << ',' << num(p.coefficient) << '\n';
            out.stdout_text << "alpha=" << num(a) << " N=" << p.sides << " L=" << num(p.length) << " side="
                            << side_name(p.side) << " C=" << num(p.coefficient) << '\n';
        }
    }
    out.files["predict.csv"] = os.str();
}

void fit_disk(const ExperimentConfig& c, Outputs& out) {
    trace::FitOptions options;
    options.half_width = c.fit_half_width;
    options.background_degree = c.background_degree;
    const double inner = c.problem == "annulus" ? c.inner_radius : 0.0;
    const double length = billiards::OrbitSpec{c.ngon, c.radius}.length();
    const auto grid = trace::TimeGrid::centered(length, kTraceHalfWidth, trace::TimeGrid::default_step({c.cutoff}));

    auto fit = [&](double a) {
        const auto pred = trace::predict_singularity(c.ngon, c.radius, a);
        return trace::fit_disk_orbit(sample_trace(c, a, grid), pred, options, inner);
    };
    std::vector<trace::FitResult> fits;
    std::optional<double> c0;
    for (double a : c.alpha) {
        fits.push_back(fit(a));
        if (a == 0.0 && !c0) c0 = fits.back().c_hat;
    }
    if (!c0) c0 = fit(0.0).c_hat;

    std::ostringstream os;
    auto h = header(c, "fit");
    h.push_back("C_hat0=" + num(*c0) + " side=" + side_name(fits.front().side) +
                " isolation=" + fits.front().isolation.description);
    write_comment_header(os, h);
    os << "alpha,C_hat,C_pred,residual,ratio,cos_alpha\n";
    for (std::size_t i = 0; i < fits.size(); ++i) {
        const auto& f = fits[i];
        const double ratio = f.c_hat / *c0;
        os << num(c.alpha[i]) << ',' << num(f.c_hat) << ',' << num(f.c_pred) << ',' << num(f.residual) << ','
           << num(ratio) << ',' << num(std::cos(c.alpha[i])) << '\n';
        out.stdout_text << "alpha=" << num(c.alpha[i]) << " C_hat=" << num(f.c_hat) << " ratio=" << num(ratio)
                        << " cos=" << num(std::cos(c.alpha[i])) << '\n';
    }
    out.files["fit.csv"] = os.str();
}

void fit_torus(const ExperimentConfig& c, Outputs& out) {
    const Lattice lattice = lattice_of(c);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& d : c.torus_vectors) {
        lo = std::min(lo, torus_length(c, d));
        hi = std::max(hi, torus_length(c, d));
    }
    const auto grid = trace::TimeGrid::centered(0.5 * (lo + hi), 0.5 * (hi - lo) + kTraceHalfWidth,
                                                trace::TimeGrid::default_step({c.cutoff}));
    trace::TorusFitOptions options;
    options.half_width = c.fit_half_width;
    options.background_degree = c.background_degree;

    auto weights = [&](double a) {
        const auto samples = sample_trace(c, a, grid);
        return trace::torus_peak_weights(samples, lattice, c.torus_vectors, options);
    };
    std::vector<std::vector<trace::TorusPeak>> all;
    std::optional<std::vector<trace::TorusPeak>> base;
    for (double a : c.alpha) {
        all.push_back(weights(a));
        if (a == 0.0 && !base) base = all.back();
    }
    if (!base) base = weights(0.0);

    std::ostringstream os;
    write_comment_header(os, header(c, "fit"));
    os << "alpha,m1,m2,length,C_hat,C_pred,residual,ratio,cos_alpha\n";
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = 0; j < all[i].size(); ++j) {
            const auto& p = all[i][j];
            const double flux = torus_a0(c, c.alpha[i]).dot(lattice.point(p.m1, p.m2));
            const double ratio = p.weight / (*base)[j].weight;
            os << num(c.alpha[i]) << ',' << p.m1 << ',' << p.m2 << ',' << num(p.length) << ',' << num(p.weight)
               << ",nan," << num(p.residual) << ',' << num(ratio) << ',' << num(std::cos(flux)) << '\n';
            out.stdout_text << "alpha=" << num(c.alpha[i]) << " d=(" << p.m1 << "," << p.m2
                            << ") weight=" << num(p.weight) << " ratio=" << num(ratio)
                            << " cos=" << num(std::cos(flux)) << '\n';
        }
    out.files["fit.csv"] = os.str();
}

void cmd_fit(const ExperimentConfig& c, Outputs& out) {
    if (c.problem == "torus") fit_torus(c, out);
    else fit_disk(c, out);
}

double rel_mismatch(const Mat2& got, const Mat2& want) {
    return (got - want).cwiseAbs().maxCoeff() / std::max(1.0, want.cwiseAbs().maxCoeff());
}

void cmd_beamcheck(const ExperimentConfig& c, Outputs& out) {
    if (c.problem == "torus") throw ConfigError("beamcheck needs a disk or annulus problem");
    const auto r = beams::analyze_closure(c.ngon, c.radius, c.offset);
    const double c0 = r.orbit.spec.closure_curvature();
    const double v = c.offset;
    const Mat2 pp = projector(r.orbit.direction.perp());
    const Mat2 id = Mat2::Identity();
    const auto& f = r.frame;
    const double frame_err = std::max({rel_mismatch(f.a, id + v * c0 * pp), rel_mismatch(f.b, -c0 * v * v * pp),
                                       rel_mismatch(f.c, c0 * pp), rel_mismatch(f.d, id - c0 * v * pp)});
    const Mat2 im = r.beam.m.imag();
    const Eigen::SelfAdjointEigenSolver<Mat2> es(0.5 * (im + im.transpose()));

    std::vector<std::pair<std::string, std::string>> rows{
        {"sides", std::to_string(c.ngon)},
        {"radius", num(c.radius)},
        {"offset", num(v)},
        {"length", num(r.orbit.spec.length())},
        {"closure_curvature", num(c0)},
    };
    const char* names[] = {"a", "b", "c", "d"};
    const Mat2* blocks[] = {&f.a, &f.b, &f.c, &f.d};
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                rows.emplace_back(std::string("frame_") + names[k] + std::to_string(i + 1) + std::to_string(j + 1),
                                  num((*blocks[k])(i, j)));
    rows.emplace_back("frame_closed_form_rel_err", num(frame_err));
    rows.emplace_back("symplectic_defect", num(f.symplectic_defect()));
    rows.emplace_back("focal_count", std::to_string(r.focal_times.size()));
    for (std::size_t i = 0; i < r.focal_times.size(); ++i)
        rows.emplace_back("focal_time_" + std::to_string(i + 1), num(r.focal_times[i]));
    rows.emplace_back("winding_at_last_focal", num(r.winding_at_last_focal));
    rows.emplace_back("winding_at_last_focal_over_pi", num(r.winding_at_last_focal / kPi));
    rows.emplace_back("theta_det_at_closure", num(r.beam.theta_det));
    rows.emplace_back("hessian_det_block_re", num(r.hessian.det_q3.real()));
    rows.emplace_back("hessian_det_block_im", num(r.hessian.det_q3.imag()));
    rows.emplace_back("hessian_det_augmented_re", num(r.hessian.det_h_tilde.real()));
    rows.emplace_back("hessian_det_augmented_im", num(r.hessian.det_h_tilde.imag()));
    rows.emplace_back("hessian_det_closed_form_re", num(r.hessian.det_closed_form.real()));
    rows.emplace_back("hessian_det_closed_form_im", num(r.hessian.det_closed_form.imag()));
    rows.emplace_back("amplitude_branch_re", num(r.sign.amplitude_branch.real()));
    rows.emplace_back("amplitude_branch_im", num(r.sign.amplitude_branch.imag()));
    rows.emplace_back("stationary_branch_re", num(r.sign.stationary_branch.real()));
    rows.emplace_back("stationary_branch_im", num(r.sign.stationary_branch.imag()));
    rows.emplace_back("sign", std::to_string(r.sign.sign));
    rows.emplace_back("phase_re", num(r.phase.real()));
    rows.emplace_back("phase_im", num(r.phase.imag()));
    rows.emplace_back("side", side_name(r.side));
    rows.emplace_back("prefactor", std::to_string(r.prefactor));
    rows.emplace_back("im_m_min_eigenvalue", num(es.eigenvalues().minCoeff()));

    std::ostringstream os;
    write_comment_header(os, header(c, "beamcheck"));
    os << "quantity,value\n";
    for (const auto& [k, val] : rows) os << k << ',' << val << '\n';
    out.files["beamcheck.csv"] = os.str();

    auto& s = out.stdout_text;
    s << "N=" << c.ngon << " R=" << num(c.radius) << " v=" << num(v) << '\n';
    s << "frame at closure vs closed form: max rel err " << num(frame_err) << '\n';
    s << "symplectic defect " << num(f.symplectic_defect()) << '\n';
    s << "focal points " << r.focal_times.size() << ", det-branch winding to the last one "
      << num(r.winding_at_last_focal / kPi) << " pi\n";
    s << "Hessian det " << num(r.hessian.det_q3.real()) << " (closed form " << num(r.hessian.det_closed_form.real())
      << ")\n";
    s << "sign " << (r.sign.sign < 0 ? "-" : "+") << ", side " << side_name(r.side) << ", prefactor "
      << r.prefactor << '\n';
}

void cmd_lengths(const ExperimentConfig& c, Outputs& out) {
    if (c.problem == "torus") throw ConfigError("lengths needs a disk or annulus problem");
    const billiards::Geometry g{c.radius, c.problem == "annulus" ? c.inner_radius : 0.0};
    const double target = billiards::OrbitSpec{c.ngon, c.radius}.length();
    const double l_max = c.length_max.value_or(std::max(2.0 * target, target + 1.0));
    const auto spec = billiards::length_spectrum(g, l_max, c.max_sides);
    const auto iso = trace::verify_isolation(spec, target, c.isolation_half_width);

    std::ostringstream os;
    auto h = header(c, "lengths");
    h.push_back("target=" + num(target) + " half_width=" + num(c.isolation_half_width) +
                " isolated=" + (iso.pass ? "true" : "false") + " nearest=" + num(iso.nearest) +
                " distance=" + num(iso.distance));
    write_comment_header(os, h);
    os << "kind,length,sides,winding,multiplicity,lower,upper\n";
    for (const auto& e : spec.entries)
        os << "orbit," << num(e.length) << ',' << e.sides << ',' << e.winding << ',' << e.multiplicity << ",,\n";
    for (const auto& b : spec.bands)
        os << (b.kind == billiards::LengthBand::Kind::obstacle ? "obstacle_band," : "whispering_band,") << ",,"
           << b.index << ",," << num(b.lower) << ',' << num(b.upper) << '\n';
    for (double a : spec.accumulation_points) os << "accumulation," << num(a) << ",,,,,\n";
    out.files["lengths.csv"] = os.str();

    out.stdout_text << spec.entries.size() << " lengths up to " << num(l_max) << " (N <= " << c.max_sides << ")\n"
                    << "target L=" << num(target) << ": nearest other length " << num(iso.nearest) << " at distance "
                    << num(iso.distance) << "; " << (iso.pass ? "isolated" : "NOT isolated") << " within "
                    << num(c.isolation_half_width) << " (" << iso.description << ")\n";
}

void cmd_verify(const ExperimentConfig& c, Outputs& out) {
    std::ostringstream report;
    write_comment_header(report, {std::string("abtrace ") + kVersion, "command=verify"});
    const auto results = acceptance::run_all({c.threads}, [](const acceptance::CriterionResult& r) {
        acceptance::print(std::cout, r);
        std::cout.flush();
    });
    bool all = true;
    for (const auto& r : results) {
        acceptance::print(report, r);
        all = all && r.pass;
    }
    report << (all ? "ALL PASS\n" : "SOME CRITERIA FAILED\n");
    out.stdout_text << (all ? "ALL PASS\n" : "SOME CRITERIA FAILED\n");
    out.files["verify.txt"] = report.str();
    out.failed = !all;
}

void write_outputs(const ExperimentConfig& c, const Outputs& out) {
    namespace fs = std::filesystem;
    const fs::path dir(c.out);
    fs::create_directories(dir);
    for (const auto& [name, text] : out.files) {
        std::ofstream f(dir / name, std::ios::binary);
        f << text;
        if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    }
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Aharonov-Bohm wave-trace experiments", "abtrace"};
    app.set_version_flag("--version", kVersion);
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<int> threads;
    std::optional<double> cutoff;
    std::optional<std::string> alpha;
    std::optional<int> ngon;
    bool print_config = false;
    app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads");
    app.add_option("--cutoff", cutoff, "window cutoff K");
    app.add_option("--alpha", alpha, "flux: angle(s) like 0.5, pi/3, 2pi/3 (comma separated) or 'sweep'");
    app.add_option("--ngon", ngon, "orbit N");
    app.add_flag("--print-config", print_config, "print the resolved configuration and exit");

    const char* names[] = {"spectrum", "trace", "predict", "fit", "beamcheck", "lengths", "verify"};
    const char* help[] = {"eigenvalue table", "band-limited wave trace near the orbit length",
                          "closed-form singularity coefficient", "fitted coefficient over a flux sweep",
                          "frame, Hessian, focal winding and sign at closure",
                          "length spectrum and isolation report", "run the acceptance suite"};
    for (int i = 0; i < 7; ++i) app.add_subcommand(names[i], help[i])->fallthrough();
    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ExitCode::ok : ExitCode::config_error;
    }

    ExperimentConfig config;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            json j;
            try {
                j = json::parse(in);
            } catch (const json::exception& e) {
                throw ConfigError("cannot parse " + config_path + ": " + e.what());
            }
            config = ExperimentConfig::from_json(j);
        }
        if (out_dir) config.out = *out_dir;
        if (threads) config.threads = *threads;
        if (cutoff) config.cutoff = *cutoff;
        if (alpha) config.alpha = parse_alpha_list(*alpha);
        if (ngon) config.ngon = *ngon;
        config.validate();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return ExitCode::config_error;
    }

    if (print_config) {
        std::cout << config.full_json().dump(2) << '\n';
        return ExitCode::ok;
    }
    const auto subs = app.get_subcommands();
    if (subs.empty()) {
        std::cerr << app.help();
        return ExitCode::config_error;
    }
    const std::string command = subs.front()->get_name();

    Outputs out;
    try {
        if (command == "spectrum") cmd_spectrum(config, out);
        else if (command == "trace") cmd_trace(config, out);
        else if (command == "predict") cmd_predict(config, out);
        else if (command == "fit") cmd_fit(config, out);
        else if (command == "beamcheck") cmd_beamcheck(config, out);
        else if (command == "lengths") cmd_lengths(config, out);
        else cmd_verify(config, out);
        write_outputs(config, out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return ExitCode::config_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return ExitCode::config_error;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return ExitCode::numerical_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ExitCode::numerical_failure;
    }
    std::cout << out.stdout_text.str();
    return out.failed ? ExitCode::acceptance_failure : ExitCode::ok;
}

} // namespace abtrace::cli

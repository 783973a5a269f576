#include "abtrace/acceptance.hpp"
#include "abtrace/beams.hpp"
#include "abtrace/billiards.hpp"
#include "abtrace/csv.hpp"
#include "abtrace/spectra.hpp"
#include "abtrace/trace.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <limits>
#include <optional>
#include <cmath>
#include <random>
#include <sstream>

namespace abtrace::acceptance {

namespace {

using trace::Side;

std::string fmt(double x, int digits = 6) {
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

trace::TraceSamples disk_trace(double alpha, double cutoff, double center, int threads) {
    const spectra::DiskFluxProblem problem{1.0, 0.0, alpha, 0.0};
    const auto spectrum = spectra::disk_flux_spectrum(problem, cutoff, threads);
    const trace::WindowSpec window{cutoff};
    const auto grid = trace::TimeGrid::centered(center, 0.35, trace::TimeGrid::default_step(window));
    return trace::bandlimited_trace(spectrum, window, grid, threads);
}

trace::FitResult disk_fit(int sides, double alpha, double cutoff, std::optional<Side> side,
                          std::optional<double> half_width, int threads) {
    const auto prediction = trace::predict_singularity(sides, 1.0, alpha);
    const auto samples = disk_trace(alpha, cutoff, prediction.length, threads);
    trace::FitOptions options;
    options.half_width = half_width;
    options.side = side;
    return trace::fit_disk_orbit(samples, prediction, options);
}

const char* side_name(Side s) { return s == Side::plus ? "plus" : "minus"; }


double matrix_mismatch(const Mat2& got, const Mat2& want) {
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            worst = std::max(worst, std::abs(got(i, j) - want(i, j)) / std::max(1.0, std::abs(want(i, j))));
    return worst;
}

CriterionResult finish(CriterionResult r, const Stopwatch& sw) {
    r.seconds = sw.seconds();
    r.pass = std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.pass; });
    return r;
}

} // namespace

CriterionResult cosine_law(const Options& options) {
    Stopwatch sw;
    CriterionResult r{1, "cosine law", false, {}, {}, 0.0};
    const double alphas[] = {0.0, kPi / 4, kPi / 3, kPi / 2, 2 * kPi / 3, kPi};
    double c0 = 0.0;
    double worst = 0.0;
    std::ostringstream rows;
    for (double a : alphas) {
        const auto fit = disk_fit(3, a, 80.0, std::nullopt, 0.3, options.threads);
        if (a == 0.0) c0 = fit.c_hat;
        const double ratio = fit.c_hat / c0;
        worst = std::max(worst, std::abs(ratio - std::cos(a)));
        rows << " " << fmt(a, 4) << ":" << fmt(ratio, 4);
    }
    const double elapsed = sw.seconds();
    r.checks.push_back({"1", worst <= 0.05,
                        "max |C(a)/C(0) - cos a| = " + fmt(worst, 3) + " (<= 0.05); ratios" + rows.str()});
    r.checks.push_back({"1t", elapsed < 600.0, "runtime " + fmt(elapsed, 3) + " s (< 600 s)"});
    r.summary = r.checks[0].detail;
    return finish(r, sw);
}

CriterionResult absolute_coefficient(const Options& options) {
    Stopwatch sw;
    CriterionResult r{2, "absolute coefficient", false, {}, {}, 0.0};
    const double expected = trace::predict_singularity(3, 1.0, 0.0).coefficient;
    const double c80 = disk_fit(3, 0.0, 80.0, std::nullopt, 0.3, options.threads).c_hat;
    const double c60 = disk_fit(3, 0.0, 60.0, std::nullopt, 0.3, options.threads).c_hat;
    const double c100 = disk_fit(3, 0.0, 100.0, std::nullopt, 0.3, options.threads).c_hat;
    const double rel = std::abs(c80 - expected) / std::abs(expected);
    r.checks.push_back({"2a", rel <= 0.10,
                        "C(0) = " + fmt(c80, 6) + " vs " + fmt(expected, 6) + ", rel err " + fmt(rel, 3) +
                            " (<= 0.10), ratio " + fmt(c80 / expected, 5)});
    const double drift = std::abs(c60 - c100) / std::abs(c100);
    r.checks.push_back({"2b", drift <= 0.05,
                        "K=60: " + fmt(c60, 6) + ", K=100: " + fmt(c100, 6) + ", rel change " + fmt(drift, 3) +
                            " (<= 0.05)"});
    r.summary = "C(0) at K=80 = " + fmt(c80, 6);
    return finish(r, sw);
}

CriterionResult side_and_sign(const Options& options) {
    Stopwatch sw;
    CriterionResult r{3, "side and sign", false, {}, {}, 0.0};
    const auto tp = disk_fit(3, 0.0, 80.0, Side::plus, 0.3, options.threads);
    const auto tm = disk_fit(3, 0.0, 80.0, Side::minus, 0.3, options.threads);
    const auto sp = disk_fit(4, 0.0, 80.0, Side::plus, std::nullopt, options.threads);
    const auto sm = disk_fit(4, 0.0, 80.0, Side::minus, std::nullopt, options.threads);
    const auto tri = beams::analyze_closure(3, 1.0);
    const auto sq = beams::analyze_closure(4, 1.0);

    const bool tri_ok = tp.residual < tm.residual && tp.c_hat < 0.0;
    const bool sq_ok = sm.residual < sp.residual && sm.c_hat < 0.0;
    std::ostringstream d;
    d << "triangle residual plus " << fmt(tp.residual, 3) << " < minus " << fmt(tm.residual, 3) << ", C = "
      << fmt(tp.c_hat, 5) << "; square (hw " << fmt(sm.isolation.distance > 0.3 ? 0.3 : 0.5 * sm.isolation.distance, 3)
      << ") residual minus " << fmt(sm.residual, 3) << " < plus " << fmt(sp.residual, 3) << ", C = "
      << fmt(sm.c_hat, 5) << "; beam analysis: triangle " << side_name(tri.side) << "/" << tri.prefactor
      << ", square " << side_name(sq.side) << "/" << sq.prefactor;
    r.checks.push_back({"3a", tri_ok && sq_ok, d.str()});

    const double want = std::abs(trace::predict_singularity(4, 1.0, 0.0).coefficient);
    const double rel = std::abs(std::abs(sm.c_hat) - want) / want;
    r.checks.push_back({"3b", rel <= 0.15,
                        "|C| square = " + fmt(std::abs(sm.c_hat), 6) + " vs " + fmt(want, 6) + ", rel err " +
                            fmt(rel, 3) + " (<= 0.15), ratio " + fmt(std::abs(sm.c_hat) / want, 5)});
    r.summary = "triangle prefers plus, square prefers minus";
    return finish(r, sw);
}

CriterionResult torus_weights(const Options& options) {
    Stopwatch sw;
    CriterionResult r{4, "torus peak weights", false, {}, {}, 0.0};
    const Lattice lattice{Vec2(1.0, 0.0), Vec2(0.31, 1.07)};
    const auto generic = spectra::lattice_genericity(lattice, 10.0);
    r.checks.push_back({"4g", generic.pass,
                        "genericity to |d| <= 10 over " + std::to_string(generic.vectors_checked) + " vectors"});

    const double cutoff = 200.0;
    const trace::WindowSpec window{cutoff};
    const auto grid = trace::TimeGrid::centered(1.0, 0.35, trace::TimeGrid::default_step(window));
    const auto dual = lattice.dual_basis();
    const Vec2 shift = 2.0 * kPi * lattice.dual_point(1, -2);
    const std::array<long, 2> vecs[] = {{1, 0}, {-1, 0}};

    auto weights = [&](const Vec2& a0) {
        const auto spectrum = spectra::torus_spectrum({lattice, a0}, cutoff);
        const auto samples = trace::bandlimited_trace(spectrum, window, grid, options.threads);
        return trace::torus_peak_weights(samples, lattice, vecs);
    };

    const double thetas[] = {0.0, kPi / 3, kPi / 2, kPi};
    double w0 = 0.0;
    double worst_ratio = 0.0;
    double worst_shift = 0.0;
    double worst_pm = 0.0;
    std::ostringstream rows;
    for (double th : thetas) {
        const Vec2 a0 = th * dual[0];
        const auto w = weights(a0);
        const auto ws = weights(a0 + shift);
        if (th == 0.0) w0 = w[0].weight;
        const double ratio = w[0].weight / w0;
        worst_ratio = std::max(worst_ratio, std::abs(ratio - std::cos(th)));
        worst_shift = std::max(worst_shift, std::abs(ws[0].weight - w[0].weight));
        worst_pm = std::max(worst_pm, std::abs(w[1].weight - w[0].weight));
        rows << " " << fmt(th, 4) << ":" << fmt(ratio, 4);
    }
    r.checks.push_back({"4r", worst_ratio <= 0.03,
                        "max |w(A0)/w(0) - cos(A0.e1)| = " + fmt(worst_ratio, 3) + " (<= 0.03); ratios" + rows.str() +
                            "; w(0) = " + fmt(w0, 6)});
    r.checks.push_back({"4s", worst_shift <= 1e-9,
                        "max |w(A0 + 2pi delta*) - w(A0)| = " + fmt(worst_shift, 3) + " (<= 1e-9); |w(d) - w(-d)| = " +
                            fmt(worst_pm, 3)});
    r.summary = r.checks[1].detail;
    return finish(r, sw);
}

CriterionResult frame_and_beam(const Options&) {
    Stopwatch sw;
    CriterionResult r{5, "frame and beam suite", false, {}, {}, 0.0};
    const double c0 = 4.0 * std::sqrt(3.0);
    const billiards::Geometry disk{1.0, 0.0};

    // Closed form of the frame at t = L for several offsets v.
    double worst_frame = 0.0;
    for (double v : {0.0, 0.1, -0.2, 0.35}) {
        const auto orbit = billiards::ngon_orbit(3, 1.0, 0.0, billiards::Orientation::counterclockwise, v);
        const double len = orbit.spec.length();
        const auto path = billiards::trace_ray(orbit.start, orbit.direction, len, disk);
        const auto f = billiards::frame_at(path, len);
        const Mat2 pp = projector(orbit.direction.perp());
        const Mat2 id = Mat2::Identity();
        worst_frame = std::max({worst_frame, matrix_mismatch(f.a, id + v * c0 * pp),
                                matrix_mismatch(f.b, -c0 * v * v * pp), matrix_mismatch(f.c, c0 * pp),
                                matrix_mismatch(f.d, id - c0 * v * pp)});
    }
    r.checks.push_back({"5a", worst_frame <= 1e-6, "F(L) vs closed form, max rel err " + fmt(worst_frame, 3)});

    // Symplectic defect and Im M on random times of the triangle and random rays.
    std::mt19937_64 rng(20240917);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<billiards::ReflectedRayPath> paths;
    for (double v : {0.0, 0.1}) {
        const auto orbit = billiards::ngon_orbit(3, 1.0, 0.0, billiards::Orientation::counterclockwise, v);
        paths.push_back(billiards::trace_ray(orbit.start, orbit.direction, orbit.spec.length(), disk));
    }
    while (paths.size() < 6) {
        const double rad = 0.9 * std::sqrt(unit(rng));
        const double ang = 2.0 * kPi * unit(rng);
        paths.push_back(billiards::trace_ray(Vec2(rad * std::cos(ang), rad * std::sin(ang)),
                                             billiards::UnitDirection::from_angle(2.0 * kPi * unit(rng)), 8.0, disk));
    }
    double worst_defect = 0.0;
    double min_im = std::numeric_limits<double>::infinity();
    int sampled = 0;
    while (sampled < 100) {
        const auto& path = paths[sampled % paths.size()];
        const double t = path.duration() * (0.01 + 0.99 * unit(rng));
        if (path.distance_to_reflection(t) < 1e-2) continue;
        const auto beam = beams::evolve_beam(beams::initial_beam(path.start(), path.initial_direction()), path, t);
        worst_defect = std::max(worst_defect, beam.frame.symplectic_defect());
        const Mat2 im = beam.m.imag();
        const Eigen::SelfAdjointEigenSolver<Mat2> es(0.5 * (im + im.transpose()));
        min_im = std::min(min_im, es.eigenvalues().minCoeff());
        ++sampled;
    }
    r.checks.push_back({"5b", worst_defect <= 1e-8, "max symplectic defect " + fmt(worst_defect, 3)});

    const auto tri = beams::analyze_closure(3, 1.0, 0.0);
    const Complex det_block = tri.hessian.det_q3;
    const Complex closed = tri.hessian.det_closed_form;
    const double err_closed = std::abs(closed - Complex(-c0, 0.0)) / c0;
    const double err_block = std::abs(det_block - closed) / std::abs(closed);
    r.checks.push_back({"5c", err_closed <= 1e-6 && err_block <= 1e-6,
                        "Hessian det closed form " + fmt(closed.real(), 10) + " (want -4 sqrt 3), block assembly " +
                            fmt(det_block.real(), 10) + ", rel errs " + fmt(err_closed, 3) + ", " + fmt(err_block, 3)});

    const double winding = tri.winding_at_last_focal;
    const bool focal_ok = tri.focal_times.size() == 3;
    r.checks.push_back({"5d", focal_ok && std::abs(winding - 5.5 * kPi) <= 1e-3,
                        "winding to third focal point " + fmt(winding / kPi, 8) + " pi (want 11/2 pi), focal count " +
                            std::to_string(tri.focal_times.size())});
    r.checks.push_back({"5e", tri.sign.sign == -1,
                        "resolved sign " + std::to_string(tri.sign.sign) + " (amplitude branch " +
                            fmt(tri.sign.amplitude_branch.real(), 6) + ", stationary branch " +
                            fmt(tri.sign.stationary_branch.real(), 6) + ")"});
    r.checks.push_back({"5f", min_im > 0.0,
                        "Im M positive definite at " + std::to_string(sampled) + " times, min eigenvalue " +
                            fmt(min_im, 4)});
    r.summary = "frames, Hessian, winding, sign, Im M";
    return finish(r, sw);
}

CriterionResult spectral_solvers(const Options& options) {
    Stopwatch sw;
    CriterionResult r{6, "spectral solver suite", false, {}, {}, 0.0};

    double worst_half = 0.0;
    const auto zeros = spectra::bessel_j_zeros(0.5, 100.0);
    for (std::size_t n = 0; n < zeros.size(); ++n) worst_half = std::max(worst_half, std::abs(zeros[n] - (n + 1) * kPi));
    r.checks.push_back({"6a", worst_half <= 1e-12 && zeros.size() == 31,
                        std::to_string(zeros.size()) + " zeros of J_1/2 below 100, max |j - n pi| = " +
                            fmt(worst_half, 3)});

    const auto ann = spectra::annulus_zeros(0.5, 0.5, 1.0, 60.0);
    double worst_ann = 0.0;
    for (std::size_t n = 0; n < ann.size(); ++n)
        worst_ann = std::max(worst_ann, std::abs(ann[n] - (n + 1) * 2.0 * kPi));
    r.checks.push_back({"6b", worst_ann <= 1e-10 && ann.size() == 9,
                        std::to_string(ann.size()) + " annulus frequencies (r0 = 0.5), max |k - 2 n pi| = " +
                            fmt(worst_ann, 3)});

    double worst_fd = 0.0;
    for (double a : {0.0, 0.3 * kPi, 0.7 * kPi, kPi}) {
        const spectra::DiskFluxProblem p{1.0, 0.0, a, 0.0};
        const auto exact = spectra::disk_flux_spectrum(p, 12.0, options.threads).eigenvalues();
        const auto fd = spectra::fd_oracle_spectrum(p, {}, 10);
        for (int i = 0; i < 10; ++i) worst_fd = std::max(worst_fd, std::abs(fd[i] - exact[i]) / exact[i]);
    }
    r.checks.push_back({"6c", worst_fd <= 0.005, "FD oracle lowest 10, max rel err " + fmt(worst_fd, 3)});

    bool identical = true;
    for (double a : {0.3 * kPi, 0.7 * kPi, 1.9}) {
        auto ev = [&](double alpha) {
            return spectra::disk_flux_spectrum({1.0, 0.0, alpha, 0.0}, 30.0, options.threads).eigenvalues();
        };
        const auto base = ev(a);
        identical = identical && base == ev(-a) && base == ev(a + 2.0 * kPi);
    }
    r.checks.push_back({"6d", identical, "spectrum(a) == spectrum(-a) == spectrum(a + 2pi) bitwise"});

    const auto weyl = spectra::disk_flux_spectrum({1.0, 0.0, 0.0, 0.0}, 100.0, options.threads);
    const double expect = 100.0 * 100.0 / 4.0;
    const double dev = std::abs(double(weyl.modes.size()) - expect) / expect;
    r.checks.push_back({"6e", dev <= 0.03,
                        "count below K=100: " + std::to_string(weyl.modes.size()) + " vs " + fmt(expect) +
                            ", rel dev " + fmt(dev, 3)});
    r.summary = "Bessel zeros, annulus, FD oracle, flux identities, Weyl";
    return finish(r, sw);
}

CriterionResult isolation(const Options&) {
    Stopwatch sw;
    CriterionResult r{7, "isolation", false, {}, {}, 0.0};
    const double l3 = 3.0 * std::sqrt(3.0);
    const auto lengths = billiards::length_spectrum({1.0, 0.0}, l3 + 1.0);
    const auto rep = trace::verify_isolation(lengths, l3, 0.3);
    const bool nearest_ok = std::abs(rep.nearest - 4.0 * std::sqrt(2.0)) < 1e-9;
    r.checks.push_back({"7", rep.pass && nearest_ok,
                        "nearest to 3 sqrt 3: " + rep.description + ", distance " + fmt(rep.distance, 6)});
    r.summary = r.checks[0].detail;
    return finish(r, sw);
}

CriterionResult planted_recovery(const Options&) {
    Stopwatch sw;
    CriterionResult r{8, "planted-model recovery", false, {}, {}, 0.0};
    const double planted = -0.2327;
    const trace::WindowSpec window{80.0};
    const double l3 = 3.0 * std::sqrt(3.0);
    trace::TraceSamples samples;
    samples.window = window;
    samples.grid = trace::TimeGrid::centered(l3, 0.35, trace::TimeGrid::default_step(window));
    const auto times = samples.grid.times();
    samples.values = trace::model_shape(Side::plus, l3, window, times);
    for (std::size_t i = 0; i < times.size(); ++i)
        samples.values[i] = planted * samples.values[i] + 3.0 - 1.5 * (times[i] - l3);
    auto prediction = trace::predict_singularity(3, 1.0, 0.0);
    trace::FitOptions fo;
    fo.half_width = 0.3;
    const auto fit = trace::fit_disk_orbit(samples, prediction, fo);
    const double rel = std::abs(fit.c_hat - planted) / std::abs(planted);
    r.checks.push_back({"8", rel <= 0.01, "recovered " + fmt(fit.c_hat, 8) + " vs " + fmt(planted) + ", rel err " +
                                              fmt(rel, 3)});
    r.summary = r.checks[0].detail;
    return finish(r, sw);
}

std::vector<CriterionResult> run_all(const Options& options,
                                     const std::function<void(const CriterionResult&)>& on_result) {
    using Fn = CriterionResult (*)(const Options&);
    const Fn all[] = {cosine_law, absolute_coefficient, side_and_sign, torus_weights,
                      frame_and_beam, spectral_solvers, isolation, planted_recovery};
    std::vector<CriterionResult> out;
    for (Fn f : all) {
        out.push_back(f(options));
        if (on_result) on_result(out.back());
    }
    return out;
}

void print(std::ostream& os, const CriterionResult& r) {
    os << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << ": " << r.summary << " ("
       << fmt(r.seconds, 3) << " s)\n";
    if (r.checks.size() > 1)
        for (const auto& c : r.checks)
            os << "    " << (c.pass ? "[PASS] " : "[FAIL] ") << c.label << " " << c.detail << '\n';
}

} // namespace abtrace::acceptance

#include "abtrace/beams.hpp"
#include "abtrace/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace abtrace::beams {

namespace {

// Determinant of H restricted to the invariant plane spanned by (u,u), (u,-u).
Complex invariant_block_det(const CMat4& h, const Vec2& u) {
    Eigen::Matrix<double, 4, 2> v;
    v << u, u, u, -u;
    v /= std::sqrt(2.0);
    const Eigen::Matrix<Complex, 4, 2> vc = v.cast<Complex>();
    const Eigen::Matrix2cd r = vc.transpose() * h * vc;
    return r.determinant();
}

} // namespace

HessianData hessian_det_at_closure(const JacobiFrame& frame, const Vec2& eta_in, double c0) {
    const Vec2 eta = eta_in.normalized();
    const CMat2 z = frame.z();
    const Complex det_z = z.determinant();
    if (std::abs(det_z) < 1e-13) throw SingularFrame("a + ib is singular at closure");

    const CMat2 a = frame.a.cast<Complex>();
    const CMat2 c = frame.c.cast<Complex>();
    const CMat2 m = (c + kI * frame.d.cast<Complex>()) * z.inverse();
    const CMat2 p_eta = projector(eta).cast<Complex>();

    HessianData out;
    out.m = m;
    out.h_tilde << m, c - m * a, c.transpose() - a.transpose() * m,
        a.transpose() * m * a - a.transpose() * c + p_eta;

    Mat2 o;
    o << eta, perp(eta);
    Mat4 b = Mat4::Zero();
    b.block<2, 2>(0, 0) = Mat2::Identity();
    b.block<2, 2>(0, 2) = o;
    b.block<2, 2>(2, 2) = o;
    const CMat4 q4 = b.transpose().cast<Complex>() * out.h_tilde * b.cast<Complex>();
    const int keep[3] = {0, 1, 3}; // (u1, u2, w); v is the null direction
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.q3(i, j) = q4(keep[i], keep[j]);

    out.det_h_tilde = out.h_tilde.determinant();
    out.det_q3 = out.q3.determinant();
    out.det_closed_form = -c0 / det_z;
    out.det_parallel = invariant_block_det(out.h_tilde, eta);
    out.det_transverse = invariant_block_det(out.h_tilde, perp(eta));
    return out;
}

Complex sqrt_det_branch_stationary(const Eigen::MatrixXcd& q) {
    if (q.rows() != q.cols() || q.rows() == 0)
        throw std::invalid_argument("sqrt_det_branch_stationary: need a nonempty square matrix");
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(q, false);
    if (solver.info() != Eigen::Success) throw ConvergenceFailure("eigenvalue solver failed");
    const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
    Complex out(1.0, 0.0);
    for (const Complex& mu : solver.eigenvalues()) {
        if (std::abs(mu) < 1e-14 * scale) throw SingularHessian("zero eigenvalue");
        const Complex w = -kI * mu;
        if (w.real() < 0.0 && std::abs(w.imag()) <= 1e-12 * std::abs(w)) {
            std::ostringstream os;
            os << "eigenvalue " << mu << " outside the continuation domain";
            throw DomainError(os.str());
        }
        out /= std::sqrt(w);
    }
    return out;
}

SingularitySignData resolve_sign(Complex amplitude_branch, Complex stationary_branch) {
    const int sign = std::abs(stationary_branch - amplitude_branch) <
                             std::abs(stationary_branch + amplitude_branch)
                         ? 1
                         : -1;
    return {amplitude_branch, stationary_branch, sign};
}

ClosureAnalysis analyze_closure(int sides, double radius, double offset, const BeamOptions& options) {
    const auto orbit =
        billiards::ngon_orbit(sides, radius, 0.0, billiards::Orientation::counterclockwise, offset);
    const double length = orbit.spec.length();
    const billiards::Geometry geometry{radius, 0.0};
    const auto path = billiards::trace_ray(orbit.start, orbit.direction, length, geometry);
    const BeamState start = initial_beam(orbit.start, orbit.direction);

    ClosureAnalysis out{orbit, {}, {}, {}, {}, 0.0, {}, {}, Side::plus, 1};
    out.beam = evolve_beam(start, path, length, nullptr, options);
    out.frame = out.beam.frame;
    const double c0 = orbit.spec.closure_curvature();
    out.hessian = hessian_det_at_closure(out.frame, orbit.direction.vec(), c0);

    out.focal_times = billiards::focal_times(path);
    if (!out.focal_times.empty())
        out.winding_at_last_focal = evolve_beam(start, path, out.focal_times.back(), nullptr, options).theta_det;

    const Complex stationary = sqrt_det_branch_stationary(out.hessian.q3) * std::sqrt(c0) *
                               std::exp(Complex(0.0, -0.25 * kPi));
    out.sign = resolve_sign(out.beam.sqrt_det(), stationary);

    Complex phase = std::exp(Complex(0.0, 0.25 * kPi)) * double(out.sign.sign);
    for (int i = 0; i < sides; ++i) phase *= -kI;
    out.phase = phase;
    const double plus = (phase * std::exp(Complex(0.0, -0.75 * kPi))).real();
    const double minus = (phase * std::exp(Complex(0.0, 0.75 * kPi))).real();
    out.side = std::abs(plus) >= std::abs(minus) ? Side::plus : Side::minus;
    const double coeff = out.side == Side::plus ? plus : minus;
    out.prefactor = coeff >= 0.0 ? 1 : -1;
    return out;
}

} // namespace abtrace::beams

#pragma once

// Gaussian-beam data along a billiard ray: phase Hessian M, the continuous
// branch of det(a + ib), the leading amplitude, and the closure analysis of
// the stationary-phase step for inscribed N-gons.

#include "abtrace/billiards.hpp"
#include "abtrace/gauge.hpp"

#include <optional>
#include <vector>

namespace abtrace::beams {

using billiards::JacobiFrame;
using billiards::ReflectedRayPath;

struct BeamState {
    double t = 0.0;
    Vec2 x = Vec2::Zero();
    Vec2 xi = Vec2::Zero();
    JacobiFrame frame;
    CMat2 z = CMat2::Identity(); ///< a + ib
    CMat2 m = kI * CMat2::Identity();
    /// Continuous argument of det Z, advanced by pi at every reflection.
    double theta_det = 0.0;
    int reflections = 0;
    /// Integral of A . dx along the ray from 0 to t.
    double holonomy = 0.0;

    Complex det_z() const { return z.determinant(); }
    /// (det Z)^{1/2} on the tracked branch: |det Z|^{1/2} exp(i theta_det / 2).
    Complex sqrt_det() const;
};

BeamState initial_beam(const Vec2& z, const billiards::UnitDirection& eta);

struct BeamOptions {
    billiards::FrameOptions frame;
    /// Initial sampling step; halved until each step moves arg det Z by < pi/2.
    double max_step = 0.05;
    int max_halvings = 40;
};

/// Advances `state` to time t >= state.t along `path`. The gauge field, if
/// given, contributes exact segment line integrals to the holonomy.
/// Throws FocalPoint if det Z vanishes at t.
BeamState evolve_beam(const BeamState& state, const ReflectedRayPath& path, double t,
                      const GaugeField* gauge = nullptr, const BeamOptions& options = {});

/// a0 = (-i)^k exp(i h) |det Z|^{-1/2} exp(-i theta_det / 2).
Complex amplitude_a0(const BeamState& state);

struct HessianData {
    CMat2 m;
    CMat4 h_tilde;       ///< block matrix with the P_eta augmentation
    CMat3 q3;            ///< Hessian in (u1, u2, w) after the chord change of variables
    Complex det_h_tilde;
    Complex det_q3;
    Complex det_closed_form; ///< -c0 det(Z^{-1})
    Complex det_parallel;    ///< product of eigenvalues on <(eta,eta),(eta,-eta)>
    Complex det_transverse;  ///< same on the eta_perp pair
};

/// Phase Hessian at closure t = L of an N-gon whose closure curvature is c0.
/// Throws SingularFrame if Z is singular.
HessianData hessian_det_at_closure(const JacobiFrame& frame, const Vec2& eta, double c0);

/// det(-iQ)^{-1/2} as the product of principal (-i mu)^{-1/2} over the
/// eigenvalues mu of Q. Throws SingularHessian for a zero eigenvalue and
/// DomainError if some -i mu lies on the negative real axis.
Complex sqrt_det_branch_stationary(const Eigen::MatrixXcd& q);

struct SingularitySignData {
    Complex amplitude_branch;  ///< (det Z)^{1/2} from the tracked beam
    Complex stationary_branch; ///< (det Z)^{1/2} implied by det(-iQ)^{-1/2}
    int sign;                  ///< +1 when the two agree, -1 otherwise
};

SingularitySignData resolve_sign(Complex amplitude_branch, Complex stationary_branch);

enum class Side { plus, minus };

/// Full beam-side analysis of one N-gon at closure.
struct ClosureAnalysis {
    billiards::OrbitRepresentative orbit;
    JacobiFrame frame;          ///< frame at t = L
    BeamState beam;             ///< beam at t = L
    HessianData hessian;
    std::vector<double> focal_times;
    /// theta_det at the last focal time before L.
    double winding_at_last_focal = 0.0;
    SingularitySignData sign;
    /// (-i)^N sign exp(i pi/4): the phase multiplying the frequency integral.
    Complex phase;
    Side side;
    /// +1 or -1, the real coefficient on the selected side.
    int prefactor;
};

ClosureAnalysis analyze_closure(int sides, double radius, double offset = 0.0,
                                const BeamOptions& options = {});

} // namespace abtrace::beams

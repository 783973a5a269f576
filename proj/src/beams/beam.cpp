#include "abtrace/beams.hpp"
#include "abtrace/errors.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

namespace abtrace::beams {

namespace {

// On one segment between reflections a, b are affine in t and c, d constant,
// so two interior frames determine the frame everywhere on the segment.
struct SegmentModel {
    double s1 = 0.0;
    JacobiFrame f1;
    Mat2 da;
    Mat2 db;

    JacobiFrame at(double t) const {
        JacobiFrame f = f1;
        f.time = t;
        f.a = f1.a + (t - s1) * da;
        f.b = f1.b + (t - s1) * db;
        return f;
    }
};

class SegmentFrames {
public:
    SegmentFrames(const ReflectedRayPath& path, const billiards::FrameOptions& opts)
        : path_(path), opts_(opts), bounds_{0.0} {
        for (const auto& e : path.reflections()) bounds_.push_back(e.time);
        bounds_.push_back(path.duration());
        models_.resize(bounds_.size() - 1);
    }

    std::size_t segment(double t) const {
        return std::min(path_.reflections_before(t), models_.size() - 1);
    }
    double end(std::size_t j) const { return bounds_[j + 1]; }

    const SegmentModel& model(std::size_t j) {
        if (!models_[j]) {
            const double lo = bounds_[j];
            const double len = bounds_[j + 1] - lo;
            if (len < 8.0 * opts_.reflection_guard)
                throw ReflectionAdjacent("segment too short to sample a frame");
            const double s1 = lo + 0.25 * len;
            const double s2 = lo + 0.5 * len;
            const JacobiFrame f1 = billiards::frame_at(path_, s1, opts_);
            const JacobiFrame f2 = billiards::frame_at(path_, s2, opts_);
            SegmentModel m;
            m.s1 = s1;
            m.f1 = f1;
            m.f1.c = 0.5 * (f1.c + f2.c);
            m.f1.d = 0.5 * (f1.d + f2.d);
            m.da = (f2.a - f1.a) / (s2 - s1);
            m.db = (f2.b - f1.b) / (s2 - s1);
            models_[j] = m;
        }
        return *models_[j];
    }

private:
    const ReflectedRayPath& path_;
    billiards::FrameOptions opts_;
    std::vector<double> bounds_;
    std::vector<std::optional<SegmentModel>> models_;
};

double parity(std::size_t k) { return (k % 2 == 0) ? 1.0 : -1.0; }

} // namespace

Complex BeamState::sqrt_det() const {
    return std::sqrt(std::abs(det_z())) * std::exp(Complex(0.0, 0.5 * theta_det));
}

BeamState initial_beam(const Vec2& z, const billiards::UnitDirection& eta) {
    BeamState s;
    s.x = z;
    s.xi = eta.vec();
    return s;
}

BeamState evolve_beam(const BeamState& state, const ReflectedRayPath& path, double t,
                      const GaugeField* gauge, const BeamOptions& options) {
    if (t < state.t || t > path.duration() * (1.0 + 1e-12))
        throw std::invalid_argument("evolve_beam: t outside [state.t, duration]");

    SegmentFrames frames(path, options.frame);
    // (-1)^k det Z is continuous across reflections; track its argument.
    double phi = state.theta_det - state.reflections * kPi;
    Complex prev = parity(state.reflections) * state.det_z();

    double s = state.t;
    while (s < t) {
        const std::size_t j = frames.segment(s);
        const double seg_end = std::min(frames.end(j), t);
        const SegmentModel& model = frames.model(j);
        double h = options.max_step;
        int halvings = 0;
        while (s < seg_end) {
            const double next = std::min(s + h, seg_end);
            const Complex cur = parity(j) * model.at(next).z().determinant();
            const double step = std::arg(cur / prev);
            if (std::abs(step) >= 0.5 * kPi) {
                if (++halvings > options.max_halvings)
                    throw ConvergenceFailure("branch tracking step underflow");
                h *= 0.5;
                continue;
            }
            phi += step;
            prev = cur;
            s = next;
            h = std::min(options.max_step, 2.0 * h);
            halvings = 0;
        }
    }

    BeamState out;
    out.t = t;
    out.x = path.position(t);
    out.xi = path.direction(t);
    out.reflections = static_cast<int>(path.reflections_before(t));
    out.theta_det = phi + out.reflections * kPi;
    out.frame = path.distance_to_reflection(t) >= options.frame.reflection_guard
                    ? billiards::frame_at(path, t, options.frame)
                    : frames.model(frames.segment(t)).at(t);
    out.z = out.frame.z();
    const Complex det = out.z.determinant();
    if (std::abs(det) < 1e-13) {
        std::ostringstream os;
        os << "det Z = " << std::abs(det) << " at t=" << t;
        throw FocalPoint(os.str());
    }
    out.m = (out.frame.c.cast<Complex>() + kI * out.frame.d.cast<Complex>()) * out.z.inverse();
    out.holonomy = state.holonomy + (gauge ? path_integral(*gauge, path, state.t, t) : 0.0);
    return out;
}

Complex amplitude_a0(const BeamState& state) {
    const Complex det = state.det_z();
    if (std::abs(det) < 1e-13) throw FocalPoint("amplitude undefined where det Z = 0");
    Complex refl(1.0, 0.0);
    for (int i = 0; i < state.reflections; ++i) refl *= -kI;
    return refl * std::exp(Complex(0.0, state.holonomy)) / std::sqrt(std::abs(det)) *
           std::exp(Complex(0.0, -0.5 * state.theta_det));
}

} // namespace abtrace::beams

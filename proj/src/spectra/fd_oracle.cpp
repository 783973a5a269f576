#include "abtrace/errors.hpp"
#include "abtrace/spectra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace abtrace::spectra {

namespace {

Eigen::VectorXd solve_block(const Eigen::VectorXd& diag, const Eigen::VectorXd& off,
                            const Eigen::VectorXd& mass) {
    const Eigen::VectorXd d = diag.cwiseQuotient(mass);
    Eigen::VectorXd e(off.size());
    for (Eigen::Index i = 0; i < off.size(); ++i) e(i) = off(i) / std::sqrt(mass(i) * mass(i + 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw ConvergenceFailure("tridiagonal eigen solver failed");
    return solver.eigenvalues();
}

Eigen::VectorXd radial_eigenvalues(double nu, double r0, int n) {
    Eigen::VectorXd mass(n), diag = Eigen::VectorXd::Zero(n), off(n - 1);
    if (r0 == 0.0) {
        // With u = r^nu v the singular behaviour at the origin is absorbed and
        // the block becomes -(r^p v')' = lambda r^p v, p = 2 nu + 1, with a
        // ghost-cell Dirichlet condition at r = 1.
        const double h = 1.0 / n;
        const double p = 2.0 * nu + 1.0;
        for (int i = 0; i < n; ++i)
            mass(i) = (std::pow((i + 1) * h, p + 1.0) - std::pow(i * h, p + 1.0)) / (p + 1.0);
        if (!(mass.array() > 0.0).all()) throw ConvergenceFailure("radial weight underflow");
        for (int i = 1; i < n; ++i) {
            const double w = std::pow(i * h, p) / h;
            diag(i - 1) += w;
            diag(i) += w;
            off(i - 1) = -w;
        }
        diag(n - 1) += 2.0 / h;
    } else {
        // Plain cell-centred scheme on [r0, 1] with Dirichlet at both ends.
        const double h = (1.0 - r0) / n;
        auto face = [&](int i) { return r0 + i * h; };
        for (int i = 0; i < n; ++i) {
            mass(i) = 0.5 * (face(i + 1) * face(i + 1) - face(i) * face(i));
            diag(i) = nu * nu * std::log(face(i + 1) / face(i));
        }
        for (int i = 1; i < n; ++i) {
            const double w = face(i) / h;
            diag(i - 1) += w;
            diag(i) += w;
            off(i - 1) = -w;
        }
        diag(0) += 2.0 * r0 / h;
        diag(n - 1) += 2.0 / h;
    }
    return solve_block(diag, off, mass);
}

} // namespace

std::vector<double> fd_oracle_spectrum(const DiskFluxProblem& problem, const FdGrid& grid, int count) {
    problem.validate();
    if (grid.radial < 4 || grid.angular < 4 || count < 1)
        throw std::invalid_argument("fd_oracle_spectrum: grid too small");
    const double r0 = problem.inner_radius / problem.radius;
    const double f = problem.alpha / (2.0 * kPi);
    const double dtheta = 2.0 * kPi / grid.angular;

    // Angular symbols of the gauge-shifted centred difference, in increasing order.
    std::vector<double> symbols;
    for (int j = -grid.angular / 2 + 1; j <= grid.angular / 2; ++j)
        symbols.push_back(std::abs(2.0 * std::sin((j + f) * dtheta / 2.0) / dtheta));
    std::sort(symbols.begin(), symbols.end());

    std::vector<double> values;
    for (double nu : symbols) {
        // The block's eigenvalues all exceed nu^2.
        if (static_cast<int>(values.size()) >= count && nu * nu > values[count - 1]) break;
        const Eigen::VectorXd ev = radial_eigenvalues(nu, r0, grid.radial);
        for (Eigen::Index i = 0; i < std::min<Eigen::Index>(ev.size(), count); ++i) values.push_back(ev(i));
        std::sort(values.begin(), values.end());
        if (static_cast<int>(values.size()) > count) values.resize(count);
    }
    if (static_cast<int>(values.size()) < count) throw ConvergenceFailure("not enough eigenvalues on this grid");
    const double scale = 1.0 / (problem.radius * problem.radius);
    for (double& v : values) v *= scale;
    return values;
}

} // namespace abtrace::spectra

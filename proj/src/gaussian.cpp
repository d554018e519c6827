#include "wcorr/gaussian.hpp"

#include "wcorr/error.hpp"

#include <cmath>

namespace wcorr {

namespace {

constexpr double kEigenFloor = -1e-10;

Eigen::VectorXd floored_eigenvalues(const Eigen::MatrixXd& symmetric, const char* what) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
    if (solver.info() != Eigen::Success) {
        throw InvalidArgument(std::string("eigendecomposition failed for ") + what);
    }
    Eigen::VectorXd values = solver.eigenvalues();
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        if (values[k] < kEigenFloor) {
            throw InvalidArgument(std::string(what) + " is not positive semidefinite");
        }
        values[k] = std::max(values[k], 0.0);
    }
    return values;
}

Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& m, const char* what) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) {
        throw InvalidArgument(std::string("eigendecomposition failed for ") + what);
    }
    Eigen::VectorXd values = solver.eigenvalues();
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        if (values[k] < kEigenFloor) {
            throw InvalidArgument(std::string(what) + " is not positive semidefinite");
        }
        values[k] = std::sqrt(std::max(values[k], 0.0));
    }
    return solver.eigenvectors() * values.asDiagonal() * solver.eigenvectors().transpose();
}

}  // namespace

GaussianSpec GaussianSpec::bivariate(double mean1, double mean2, double sigma1, double sigma2,
                                     double rho) {
    if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) throw InvalidArgument("standard deviations must be positive");
    if (!(rho >= -1.0 && rho <= 1.0)) throw InvalidArgument("rho must lie in [-1, 1]");
    GaussianSpec spec;
    spec.mean1 = Eigen::VectorXd::Constant(1, mean1);
    spec.mean2 = Eigen::VectorXd::Constant(1, mean2);
    spec.cov11 = Eigen::MatrixXd::Constant(1, 1, sigma1 * sigma1);
    spec.cov12 = Eigen::MatrixXd::Constant(1, 1, rho * sigma1 * sigma2);
    spec.cov21 = spec.cov12;
    spec.cov22 = Eigen::MatrixXd::Constant(1, 1, sigma2 * sigma2);
    return spec;
}

double gaussian_w2_correlation(double rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) throw InvalidArgument("rho must lie in [-1, 1]");
    return 1.0 - std::sqrt(1.0 - rho * rho);
}

double gaussian_conditional_w2(const GaussianSpec& spec, const Eigen::VectorXd& x1) {
    const auto d1 = spec.cov11.rows();
    const auto d2 = spec.cov22.rows();
    if (spec.cov11.cols() != d1 || spec.cov22.cols() != d2 || spec.cov12.rows() != d1 ||
        spec.cov12.cols() != d2 || spec.cov21.rows() != d2 || spec.cov21.cols() != d1 ||
        spec.mean1.size() != d1 || spec.mean2.size() != d2 || x1.size() != d1) {
        throw InvalidArgument("Gaussian blocks have inconsistent shapes");
    }
    Eigen::MatrixXd joint(d1 + d2, d1 + d2);
    joint << spec.cov11, spec.cov12, spec.cov21, spec.cov22;
    floored_eigenvalues(0.5 * (joint + joint.transpose()), "covariance");

    Eigen::FullPivLU<Eigen::MatrixXd> lu(spec.cov11);
    if (!lu.isInvertible()) throw InvalidArgument("covariance block of X1 is singular");

    const Eigen::MatrixXd gain = spec.cov21 * lu.inverse();  // S21 S11^-1
    const Eigen::MatrixXd schur = spec.cov22 - gain * spec.cov12;
    const Eigen::VectorXd shift = gain * (x1 - spec.mean1);

    const Eigen::MatrixXd root22 = symmetric_sqrt(0.5 * (spec.cov22 + spec.cov22.transpose()), "S22");
    const Eigen::MatrixXd inner = root22 * schur * root22;
    const Eigen::VectorXd spectrum =
        floored_eigenvalues(0.5 * (inner + inner.transpose()), "S22^2 - S21 S11^-1 S12 S22");
    const double trace_root = spectrum.cwiseSqrt().sum();

    const double squared = shift.squaredNorm() + spec.cov22.trace() + schur.trace() - 2.0 * trace_root;
    return std::sqrt(std::max(squared, 0.0));
}

}  // namespace wcorr

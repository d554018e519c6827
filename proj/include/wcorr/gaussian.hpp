#pragma once

#include <Eigen/Dense>

namespace wcorr {

/// Joint normal law of (X1, X2) with X1 in R^d1, X2 in R^d2, in block form.
struct GaussianSpec {
    Eigen::VectorXd mean1;
    Eigen::VectorXd mean2;
    Eigen::MatrixXd cov11;
    Eigen::MatrixXd cov12;
    Eigen::MatrixXd cov21;
    Eigen::MatrixXd cov22;

    static GaussianSpec bivariate(double mean1, double mean2, double sigma1, double sigma2,
                                  double rho);
};

/// 1 - sqrt(1 - rho^2): for a bivariate normal law, the ratio of second
/// moments E[W_2(pi_x, nu)^2] / E|Y - Y'|^2, i.e. the square of the forward
/// W_2 coefficient.
double gaussian_w2_correlation(double rho);

/**
 * W_2 distance between the conditional law of X2 given X1 = x1 and the law
 * of X2, from the block-covariance trace formula
 *
 *   |S21 S11^-1 (x1 - a1)|^2 + tr S22 + tr(S22 - S21 S11^-1 S12)
 *     - 2 tr((S22^2 - S21 S11^-1 S12 S22)^(1/2)).
 *
 * The square-root trace is evaluated through the symmetric matrix
 * S22^(1/2) (S22 - S21 S11^-1 S12) S22^(1/2), which has the same spectrum.
 * Eigenvalues in [-1e-10, 0) are floored at zero.
 */
double gaussian_conditional_w2(const GaussianSpec& spec, const Eigen::VectorXd& x1);

}  // namespace wcorr

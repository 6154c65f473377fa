#pragma once

#include <Eigen/Core>

#include "meshfield/types.hpp"

namespace meshfield {

/// Solves the regularized normal equations (MtM + eps I) x = Mtb.
/// Cholesky (LDLT) for systems up to `direct_limit` unknowns, conjugate
/// gradient beyond that. With eps == 0 a numerically singular system throws
/// NumericalError carrying a condition estimate.
Eigen::VectorXd solve_normal(const Eigen::MatrixXd& MtM, const Eigen::VectorXd& Mtb,
                             double eps, int direct_limit = 2000);

/// Rough condition estimate of a symmetric positive semi-definite matrix
/// (ratio of extreme diagonal pivots of its LDLT factorization).
double condition_estimate(const Eigen::MatrixXd& MtM);

/// Smallest singular value of a (possibly tall) matrix, via the eigenvalues
/// of M^T M.
double smallest_singular_value(const Eigen::MatrixXd& M);

}  // namespace meshfield

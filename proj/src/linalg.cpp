#include "meshfield/linalg.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace meshfield {

double condition_estimate(const Eigen::MatrixXd& MtM) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(MtM);
    Eigen::VectorXd d = ldlt.vectorD().cwiseAbs();
    double dmax = d.maxCoeff();
    double dmin = d.minCoeff();
    if (dmin <= 0.0) return std::numeric_limits<double>::infinity();
    return dmax / dmin;
}

Eigen::VectorXd solve_normal(const Eigen::MatrixXd& MtM, const Eigen::VectorXd& Mtb,
                             double eps, int direct_limit) {
    Eigen::MatrixXd A = MtM;
    if (eps > 0.0) A.diagonal().array() += eps;
    if (A.rows() <= direct_limit) {
        Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
        Eigen::VectorXd x;
        if (ldlt.info() == Eigen::Success) {
            x = ldlt.solve(Mtb);
        } else if (eps > 0.0) {
            // Rounding can push the regularized Gram matrix slightly
            // indefinite; a full-pivot LU still solves it reliably.
            x = Eigen::FullPivLU<Eigen::MatrixXd>(A).solve(Mtb);
        } else {
            throw NumericalError("normal-equation factorization failed",
                                 condition_estimate(MtM));
        }
        if (eps == 0.0) {
            // Detect a numerically singular unregularized system.
            double cond = condition_estimate(MtM);
            if (!std::isfinite(cond) || cond > 1e15)
                throw NumericalError("singular normal equations (set epsilon > 0)", cond);
        }
        return x;
    }
    Eigen::ConjugateGradient<Eigen::MatrixXd, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(1e-12);
    cg.setMaxIterations(10 * A.rows());
    cg.compute(A);
    Eigen::VectorXd x = cg.solve(Mtb);
    if (cg.info() != Eigen::Success && eps == 0.0)
        throw NumericalError("conjugate gradient did not converge", condition_estimate(MtM));
    return x;
}

double smallest_singular_value(const Eigen::MatrixXd& M) {
    // SVD on M itself: forming the Gram matrix first would square the condition number and
    // underflow the smallest singular values of very flat kernel systems.
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
    return svd.singularValues().minCoeff();
}

}  // namespace meshfield

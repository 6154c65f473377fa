#pragma once

#include <string>
#include <vector>

#include "meshfield/model.hpp"
#include "meshfield/sample_set.hpp"

namespace meshfield {

struct FitConfig {
    Kernel kernel{KernelFamily::Gaussian, 1.0};
    /// RBF centres; empty means "place one centre at every constrained point,
    /// overlapped constraints counted once".
    std::vector<Vec3> centres;
    /// Trade-off weight on the vector (gradient) term of the energy.
    double delta = 1.0;
    /// Tikhonov term added to the normal-equation diagonal.
    double epsilon = 1e-10;
};

struct FitReport {
    double energy = 0.0;                       // value of the minimized functional
    double relative_residual = 0.0;            // |M a - b| / |b|
    double condition_estimate = 0.0;
    std::vector<std::string> warnings;
};

/// Minimizes sum_I |u(p_i) - f_i|^2 + delta sum_J |grad u(p_j) - v_j|^2 over
/// the RBF coefficients, via the regularized normal equations of the stacked
/// scalar/gradient system.
ScalarPotentialModel fit_mixed(const SampleSet& samples, const FitConfig& config,
                               FitReport* report = nullptr);

/// Fits each component of the sampled vector field independently as a scalar
/// RBF expansion (interpolation when the centres are the sample points).
std::vector<ScalarPotentialModel> fit_componentwise(const SampleSet& samples,
                                                    const FitConfig& config);

struct ResidualReport {
    std::vector<double> scalar_residuals;   // |u(p_i) - f_i|, order of samples.scalar_values
    std::vector<double> vector_residuals;   // |grad u(p_j) - v_j|
    double energy = 0.0;                    // delta-weighted sum of squares
};

ResidualReport residual_report(const ScalarPotentialModel& model, const SampleSet& samples,
                               double delta = 1.0);

}  // namespace meshfield

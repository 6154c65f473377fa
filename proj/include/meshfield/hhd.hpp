#pragma once

#include <string>
#include <vector>

#include "meshfield/fit.hpp"
#include "meshfield/model.hpp"
#include "meshfield/sample_set.hpp"

namespace meshfield {

enum class HHDStrategy { Direct, Weighted, Laplace };
enum class HHDFitMode { Independent, SequentialResidual };

struct HHDConfig {
    HHDStrategy strategy = HHDStrategy::Direct;
    Kernel kernel{KernelFamily::Gaussian, 1.0};
    /// Centres of both potentials; empty means "use the sample points".
    std::vector<Vec3> centres;
    double epsilon = 1e-10;
    /// Quadrature nodes per axis for the Weighted strategy.
    int quadrature = 32;
    HHDFitMode fit_mode = HHDFitMode::Independent;
};

struct HHDDiagnostics {
    std::string strategy;
    double harmonic_max = 0.0;            // max |h_i|
    double harmonic_rms = 0.0;
    double conservative_energy_fraction = 0.0;  // sum |grad u|^2 / sum |v|^2 at samples
    double solenoidal_energy_fraction = 0.0;
    double harmonic_energy_fraction = 0.0;
    double condition_conservative = 0.0;
    double condition_solenoidal = 0.0;
    /// Laplace strategy: relative coefficient shift when the regularization
    /// is increased tenfold; > 1e-3 means the regularization matters.
    double regularization_shift = 0.0;
};

/// v = grad u + curl w + h at the input points. The harmonic part is kept as
/// pointwise samples (no basis expansion), so the reconstruction is exact at
/// the inputs by construction.
struct HHDResult {
    ScalarPotentialModel conservative;
    VectorPotentialModel solenoidal;
    std::vector<Vec3> harmonic_samples;
    HHDDiagnostics diagnostics;
};

HHDResult decompose(const SampleSet& samples, const HHDConfig& config);
HHDResult decompose_direct(const SampleSet& samples, const HHDConfig& config);
HHDResult decompose_weighted(const SampleSet& samples, const HHDConfig& config);
HHDResult decompose_laplace(const SampleSet& samples, const HHDConfig& config);

struct ExactnessDiagnostics {
    double max_curl_of_gradient = 0.0;   // max |curl(grad u)| at random interior points
    double max_div_of_curl = 0.0;        // max |div(curl w)|
    double harmonic_max = 0.0;
    double harmonic_rms = 0.0;
    double reconstruction_max_error = 0.0;  // |v - (grad u + curl w + h)| at samples
    double conservative_energy_fraction = 0.0;
    double solenoidal_energy_fraction = 0.0;
    double harmonic_energy_fraction = 0.0;
};

/// Evaluates the exactness identities of the fitted decomposition at
/// `n_points` random points inside the sample bounding box.
ExactnessDiagnostics residual_diagnostics(const HHDResult& result, const SampleSet& samples,
                                          int n_points = 200, unsigned seed = 7u);

std::string to_string(const ExactnessDiagnostics& d);

}  // namespace meshfield

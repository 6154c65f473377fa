#pragma once

#include <vector>

#include "meshfield/analysis.hpp"
#include "meshfield/fit.hpp"
#include "meshfield/sample_set.hpp"

namespace meshfield {

enum class CentreStrategy { KernelImportance, Uniform, Random, AdaptiveResidual, KMeans };
enum class ImportanceSource { FieldMagnitude, PotentialValue };

struct CentreSelection {
    CentreStrategy strategy = CentreStrategy::KernelImportance;
    int target_count = 100;
    ImportanceSource importance_source = ImportanceSource::FieldMagnitude;
    /// AdaptiveResidual: stop doubling once the fit's relative residual
    /// drops below this fraction.
    double residual_threshold = 0.05;
    int max_count = 5000;
    unsigned seed = 1u;
    /// Kernel used by the AdaptiveResidual trial fits.
    Kernel fit_kernel{KernelFamily::Gaussian, 1.0};
    double fit_epsilon = 1e-10;
};

/// Picks RBF centres from the sample points (Uniform snaps grid nodes to the
/// nearest samples). Deterministic under a fixed seed.
std::vector<Vec3> select_centres(const SampleSet& samples, const CentreSelection& sel);

struct SelectionQuality {
    MetricsReport metrics_a;
    MetricsReport metrics_b;
};

/// Fits one model per centre set on the same samples and scores each fitted
/// gradient field against the sampled vectors.
SelectionQuality selection_quality(const SampleSet& samples, const std::vector<Vec3>& centres_a,
                                   const std::vector<Vec3>& centres_b, const FitConfig& config,
                                   const std::vector<double>& thresholds = {0.05, 0.10});

}  // namespace meshfield

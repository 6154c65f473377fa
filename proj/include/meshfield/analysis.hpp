#pragma once

#include <map>
#include <string>
#include <vector>

#include "meshfield/model.hpp"
#include "meshfield/sample_set.hpp"

namespace meshfield {

/// Field-comparison quality metrics, each averaged over the components of
/// the field. NRMSE is normalized by the per-component reference range.
struct MetricsReport {
    double nc = 0.0;                       // normalized cross correlation, in [-1, 1]
    double nrmse = 0.0;
    std::map<double, double> percentiles;  // threshold -> fraction of points below it
    double mean_angle_deg = 0.0;
    double max_angle_deg = 0.0;
    double linf = 0.0;                     // max |diff| / max |reference|
    bool degenerate = false;               // zero-variance reference, NC undefined
};

MetricsReport compute_metrics(const std::vector<Vec3>& reference,
                              const std::vector<Vec3>& candidate, int dimension,
                              const std::vector<double>& thresholds = {0.05, 0.10});

std::string to_string(const MetricsReport& m);

/// Upper bound sqrt(k) |phi'|_inf / sigma_min(Phi) * |e| on the gradient
/// deviation caused by a perturbation of norm |e| on the vector data.
/// |phi'|_inf is taken over [0, domain_diameter].
double gradient_stability_bound(const ScalarPotentialModel& model,
                                const std::vector<Vec3>& sample_points, double noise_norm);

/// Analogue for the rotor system: sqrt(6 k) |phi'|_inf / sigma_min(A) * |e|.
double rotor_stability_bound(const VectorPotentialModel& model,
                             const std::vector<Vec3>& sample_points, double noise_norm);

/// Adds zero-mean Gaussian noise to the vector values; per-component std is
/// relative_level times the per-component RMS. Deterministic under seed.
SampleSet add_noise(const SampleSet& samples, double relative_level, unsigned seed);

enum class CriticalPointType { Minimum, Maximum, Saddle, Degenerate };

struct CriticalPoint {
    Vec3 location;
    double gradient_norm = 0.0;
    CriticalPointType classification = CriticalPointType::Degenerate;
    std::vector<double> eigenvalues;
    int iterations = 0;
    bool converged = false;
    std::vector<Vec3> path;           // iterates, seed first
    std::vector<double> trace;        // |grad u| per accepted iterate
};

struct CriticalPointOptions {
    double tolerance = 1e-12;
    int max_iterations = 100;
    /// Deduplication distance between converged points.
    double merge_distance = 1e-6;
    /// When set, converged points outside this box are discarded.
    bool restrict_to_box = false;
    Box box;
};

/// Solves grad u(p) = 0 from each guess with a dogleg trust-region iteration
/// on the analytic gradient/Hessian, then classifies converged points by the
/// Hessian eigenvalue signs.
std::vector<CriticalPoint> find_critical_points(const ScalarPotentialModel& model,
                                                const std::vector<Vec3>& guesses,
                                                const CriticalPointOptions& options = {});

/// Default seeding: a regular 5^d grid of guesses over the box.
std::vector<Vec3> default_critical_point_guesses(const Box& box, int dimension,
                                                 int per_axis = 5);

std::string to_string(CriticalPointType t);

}  // namespace meshfield

#include "meshfield/centres.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace meshfield {

namespace {

/// Per-point importance weights used by the greedy strategy.
std::vector<double> importance_weights(const SampleSet& samples, ImportanceSource source) {
    std::vector<double> w(samples.size(), 0.0);
    if (source == ImportanceSource::FieldMagnitude) {
        for (const auto& [idx, v] : samples.vector_values)
            w[idx] = std::max(w[idx], v.head(samples.dimension).norm());
        // Points with only a scalar constraint still deserve nonzero weight.
        for (const auto& [idx, f] : samples.scalar_values)
            if (w[idx] == 0.0) w[idx] = std::abs(f);
    } else {
        for (const auto& [idx, f] : samples.scalar_values) w[idx] = std::abs(f);
    }
    return w;
}

/// Greedy selection maximizing importance times distance to the nearest
/// already-selected centre, seeded with the most important point.
std::vector<int> greedy_importance(const SampleSet& samples, int count,
                                   ImportanceSource source) {
    std::vector<double> w = importance_weights(samples, source);
    const int n = static_cast<int>(samples.size());
    // Tiny floor so zero-importance points can still fill up the count.
    double w_max = *std::max_element(w.begin(), w.end());
    double floor_w = w_max > 0.0 ? 1e-9 * w_max : 1.0;
    for (double& x : w) x = std::max(x, floor_w);

    std::vector<int> picked;
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    int first = static_cast<int>(std::max_element(w.begin(), w.end()) - w.begin());
    picked.push_back(first);
    while (static_cast<int>(picked.size()) < count && static_cast<int>(picked.size()) < n) {
        const Vec3& last = samples.points[picked.back()];
        int best = -1;
        double best_score = -1.0;
        for (int i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], (samples.points[i] - last).norm());
            if (nearest[i] == 0.0) continue;  // already selected (or coincident)
            double score = w[i] * nearest[i];
            if (score > best_score) {
                best_score = score;
                best = i;
            }
        }
        if (best < 0) break;
        picked.push_back(best);
    }
    return picked;
}

std::vector<Vec3> gather(const SampleSet& samples, const std::vector<int>& idx) {
    std::vector<Vec3> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(samples.points[i]);
    return out;
}

std::vector<Vec3> uniform_snapped(const SampleSet& samples, int count) {
    const int d = samples.dimension;
    Box box = samples.bounding_box();
    int per_axis = std::max(1, static_cast<int>(std::ceil(std::pow(double(count), 1.0 / d))));
    const int n = static_cast<int>(samples.size());

    std::vector<bool> used(n, false);
    std::vector<int> picked;
    auto snap = [&](const Vec3& node) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            if (used[i]) continue;
            double dist = (samples.points[i] - node).norm();
            if (dist < best_d) {
                best_d = dist;
                best = i;
            }
        }
        if (best >= 0) {
            used[best] = true;
            picked.push_back(best);
        }
    };

    const int nz = d == 3 ? per_axis : 1;
    for (int iz = 0; iz < nz && static_cast<int>(picked.size()) < count; ++iz)
        for (int iy = 0; iy < per_axis && static_cast<int>(picked.size()) < count; ++iy)
            for (int ix = 0; ix < per_axis && static_cast<int>(picked.size()) < count; ++ix) {
                auto coord = [&](int i, int axis) {
                    double lo = box.lo[axis], hi = box.hi[axis];
                    return per_axis == 1 ? 0.5 * (lo + hi)
                                         : lo + (hi - lo) * i / (per_axis - 1);
                };
                Vec3 node(coord(ix, 0), coord(iy, 1), d == 3 ? coord(iz, 2) : 0.0);
                snap(node);
            }
    // Top up with the farthest remaining samples if grid nodes collided.
    while (static_cast<int>(picked.size()) < std::min(count, n)) {
        int best = -1;
        double best_d = -1.0;
        for (int i = 0; i < n; ++i) {
            if (used[i]) continue;
            double nd = std::numeric_limits<double>::infinity();
            for (int j : picked) nd = std::min(nd, (samples.points[i] - samples.points[j]).norm());
            if (nd > best_d) {
                best_d = nd;
                best = i;
            }
        }
        used[best] = true;
        picked.push_back(best);
    }
    return gather(samples, picked);
}

std::vector<Vec3> random_subset(const SampleSet& samples, int count, unsigned seed) {
    std::vector<int> idx(samples.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(std::min<std::size_t>(count, idx.size()));
    return gather(samples, idx);
}

std::vector<Vec3> kmeans(const SampleSet& samples, int count, unsigned seed) {
    const int d = samples.dimension;
    std::vector<Vec3> means = random_subset(samples, count, seed);
    const int k = static_cast<int>(means.size());
    std::vector<int> assign(samples.size(), 0);
    for (int iter = 0; iter < 50; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int j = 0; j < k; ++j) {
                double dist = (samples.points[i] - means[j]).squaredNorm();
                if (dist < best_d) {
                    best_d = dist;
                    best = j;
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;
        std::vector<Vec3> sums(k, Vec3::Zero());
        std::vector<int> counts(k, 0);
        for (std::size_t i = 0; i < samples.size(); ++i) {
            sums[assign[i]] += samples.points[i];
            ++counts[assign[i]];
        }
        for (int j = 0; j < k; ++j)
            if (counts[j] > 0) means[j] = sums[j] / counts[j];
        (void)d;
    }
    return means;
}

std::vector<Vec3> adaptive_residual(const SampleSet& samples, const CentreSelection& sel) {
    const int n = static_cast<int>(samples.size());
    int k = std::max(16, sel.target_count / 8);
    std::vector<Vec3> centres;
    while (true) {
        k = std::min({k, sel.max_count, n});
        centres = gather(samples, greedy_importance(samples, k, sel.importance_source));
        FitConfig cfg;
        cfg.kernel = sel.fit_kernel;
        cfg.centres = centres;
        cfg.epsilon = sel.fit_epsilon;
        FitReport report;
        fit_mixed(samples, cfg, &report);
        if (report.relative_residual <= sel.residual_threshold) break;
        if (k >= sel.max_count || k >= n) break;
        k *= 2;
    }
    return centres;
}

}  // namespace

std::vector<Vec3> select_centres(const SampleSet& samples, const CentreSelection& sel) {
    if (samples.points.empty()) throw InputError("cannot select centres from an empty sample set");
    if (sel.target_count <= 0) throw ConfigError("centre target count must be positive");
    switch (sel.strategy) {
        case CentreStrategy::KernelImportance:
            return gather(samples,
                          greedy_importance(samples, sel.target_count, sel.importance_source));
        case CentreStrategy::Uniform:
            return uniform_snapped(samples, sel.target_count);
        case CentreStrategy::Random:
            return random_subset(samples, sel.target_count, sel.seed);
        case CentreStrategy::AdaptiveResidual:
            return adaptive_residual(samples, sel);
        case CentreStrategy::KMeans:
            return kmeans(samples, sel.target_count, sel.seed);
    }
    throw ConfigError("unknown centre selection strategy");
}

SelectionQuality selection_quality(const SampleSet& samples, const std::vector<Vec3>& centres_a,
                                   const std::vector<Vec3>& centres_b, const FitConfig& config,
                                   const std::vector<double>& thresholds) {
    auto score = [&](const std::vector<Vec3>& centres) {
        FitConfig cfg = config;
        cfg.centres = centres;
        ScalarPotentialModel model = fit_mixed(samples, cfg);
        std::vector<Vec3> reference, candidate;
        reference.reserve(samples.vector_values.size());
        for (const auto& [idx, v] : samples.vector_values) {
            reference.push_back(v);
            candidate.push_back(model.gradient(samples.points[idx]));
        }
        return compute_metrics(reference, candidate, samples.dimension, thresholds);
    };
    return SelectionQuality{score(centres_a), score(centres_b)};
}

}  // namespace meshfield

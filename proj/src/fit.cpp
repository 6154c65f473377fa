#include "meshfield/fit.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/QR>

#include "meshfield/linalg.hpp"

namespace meshfield {

namespace {

std::vector<Vec3> effective_centres(const SampleSet& samples, const FitConfig& config) {
    if (!config.centres.empty()) return config.centres;
    return samples.constrained_points();
}

}  // namespace

ScalarPotentialModel fit_mixed(const SampleSet& samples, const FitConfig& config,
                               FitReport* report) {
    samples.validate();
    if (samples.scalar_values.empty() && samples.vector_values.empty())
        throw InputError("fit_mixed needs at least one constraint");
    if (config.delta <= 0.0) throw ConfigError("delta must be positive");
    if (config.epsilon < 0.0) throw ConfigError("epsilon must be nonnegative");
    if (!samples.vector_values.empty() && !config.kernel.existence_flags().gradient_exists)
        throw ConfigError("kernel gradient does not exist; cannot impose vector constraints");

    const int d = samples.dimension;
    std::vector<Vec3> centres = effective_centres(samples, config);
    const Eigen::Index k = static_cast<Eigen::Index>(centres.size());
    const Eigen::Index k1 = static_cast<Eigen::Index>(samples.scalar_values.size());
    const Eigen::Index k2 = static_cast<Eigen::Index>(samples.vector_values.size());
    const Eigen::Index rows = k1 + d * k2;
    const double sqrt_delta = std::sqrt(config.delta);

    // Stacked system: k1 value rows, then d gradient rows per vector
    // constraint, scaled by sqrt(delta). Assembled in row chunks so the
    // full M never has to fit in memory for large sample sets. Small
    // systems keep the stacked matrix and solve by QR instead, which
    // avoids squaring the condition number.
    Eigen::MatrixXd MtM = Eigen::MatrixXd::Zero(k, k);
    Eigen::VectorXd Mtb = Eigen::VectorXd::Zero(k);
    double b_sq = 0.0;

    const bool use_qr = rows * k <= 8'000'000;
    Eigen::MatrixXd M_full;
    Eigen::VectorXd b_full;
    Eigen::Index full_fill = 0;
    if (use_qr) {
        // Extra sqrt(eps) * I rows make the QR solution satisfy the same
        // regularized normal equations (M^T M + eps I) alpha = M^T b.
        M_full.setZero(rows + k, k);
        b_full.setZero(rows + k);
        M_full.bottomRows(k).diagonal().setConstant(std::sqrt(config.epsilon));
    }

    const Eigen::Index chunk_rows = 4096;
    Eigen::MatrixXd M(std::min(chunk_rows, rows), k);
    Eigen::VectorXd b(std::min(chunk_rows, rows));
    Eigen::Index fill = 0;
    auto flush = [&]() {
        if (fill == 0) return;
        MtM.selfadjointView<Eigen::Lower>().rankUpdate(M.topRows(fill).transpose());
        Mtb.noalias() += M.topRows(fill).transpose() * b.head(fill);
        b_sq += b.head(fill).squaredNorm();
        fill = 0;
    };
    auto push_row = [&](auto&& row_fn, double rhs) {
        row_fn(M.row(fill));
        b[fill] = rhs;
        if (use_qr) {
            M_full.row(full_fill) = M.row(fill);
            b_full[full_fill] = rhs;
            ++full_fill;
        }
        if (++fill == M.rows()) flush();
    };

    for (const auto& [idx, f] : samples.scalar_values) {
        const Vec3& p = samples.points[idx];
        push_row(
            [&](auto row) {
                for (Eigen::Index j = 0; j < k; ++j)
                    row[j] = config.kernel.eval((p - centres[j]).norm());
            },
            f);
    }
    for (const auto& [idx, v] : samples.vector_values) {
        const Vec3& p = samples.points[idx];
        for (int axis = 0; axis < d; ++axis) {
            push_row(
                [&](auto row) {
                    for (Eigen::Index j = 0; j < k; ++j)
                        row[j] = sqrt_delta * config.kernel.rbf_gradient(centres[j], p)[axis];
                },
                sqrt_delta * v[axis]);
        }
    }
    flush();
    MtM.triangularView<Eigen::Upper>() = MtM.transpose();

    Eigen::VectorXd alpha;
    if (use_qr) {
        if (config.epsilon == 0.0) {
            // Preserve the singularity diagnostics of the unregularized path.
            alpha = solve_normal(MtM, Mtb, 0.0);
        } else {
            alpha = M_full.householderQr().solve(b_full);
        }
    } else {
        alpha = solve_normal(MtM, Mtb, config.epsilon);
    }

    ScalarPotentialModel model(config.kernel, d, std::move(centres), std::move(alpha));
    if (report) {
        *report = FitReport{};
        ResidualReport res = residual_report(model, samples, config.delta);
        report->energy = res.energy;
        report->relative_residual = b_sq > 0.0 ? std::sqrt(res.energy / b_sq) : 0.0;
        report->condition_estimate = condition_estimate(MtM);
        double fmax = 0.0, vmax = 0.0;
        for (const auto& [idx, f] : samples.scalar_values) fmax = std::max(fmax, std::abs(f));
        for (const auto& [idx, v] : samples.vector_values) vmax = std::max(vmax, v.norm());
        if (fmax > 0.0 && vmax > 0.0 && (fmax / vmax > 1e3 || vmax / fmax > 1e3))
            report->warnings.push_back(
                "scalar and vector value ranges differ by more than 1e3; "
                "consider normalizing the inputs or adjusting delta");
    }
    return model;
}

std::vector<ScalarPotentialModel> fit_componentwise(const SampleSet& samples,
                                                    const FitConfig& config) {
    samples.validate();
    if (samples.vector_values.empty())
        throw InputError("fit_componentwise needs vector constraints");
    const int d = samples.dimension;

    std::vector<Vec3> centres = config.centres;
    if (centres.empty())
        for (const auto& [idx, v] : samples.vector_values) centres.push_back(samples.points[idx]);
    const Eigen::Index k = static_cast<Eigen::Index>(centres.size());
    const Eigen::Index n = static_cast<Eigen::Index>(samples.vector_values.size());

    Eigen::MatrixXd gram(n, k);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vec3& p = samples.points[samples.vector_values[i].first];
        for (Eigen::Index j = 0; j < k; ++j)
            gram(i, j) = config.kernel.eval((p - centres[j]).norm());
    }

    std::vector<ScalarPotentialModel> models;
    models.reserve(d);
    if (n == k) {
        // Square interpolation system: solve the Gram system directly.
        Eigen::MatrixXd A = gram;
        A.diagonal().array() += config.epsilon;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
        for (int c = 0; c < d; ++c) {
            Eigen::VectorXd rhs(n);
            for (Eigen::Index i = 0; i < n; ++i) rhs[i] = samples.vector_values[i].second[c];
            models.emplace_back(config.kernel, d, centres, lu.solve(rhs));
        }
    } else {
        Eigen::MatrixXd MtM = gram.transpose() * gram;
        for (int c = 0; c < d; ++c) {
            Eigen::VectorXd rhs(n);
            for (Eigen::Index i = 0; i < n; ++i) rhs[i] = samples.vector_values[i].second[c];
            models.emplace_back(config.kernel, d, centres,
                                solve_normal(MtM, gram.transpose() * rhs, config.epsilon));
        }
    }
    return models;
}

ResidualReport residual_report(const ScalarPotentialModel& model, const SampleSet& samples,
                               double delta) {
    ResidualReport out;
    for (const auto& [idx, f] : samples.scalar_values) {
        double r = std::abs(model.eval(samples.points[idx]) - f);
        out.scalar_residuals.push_back(r);
        out.energy += r * r;
    }
    for (const auto& [idx, v] : samples.vector_values) {
        Vec3 g = model.gradient(samples.points[idx]);
        if (model.dimension() == 2) g.z() = 0.0;
        double r = (g - v).norm();
        out.vector_residuals.push_back(r);
        out.energy += delta * r * r;
    }
    return out;
}

}  // namespace meshfield

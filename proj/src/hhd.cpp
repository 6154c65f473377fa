#include "meshfield/hhd.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "meshfield/linalg.hpp"

namespace meshfield {

namespace {

struct FieldSamples {
    std::vector<Vec3> points;
    std::vector<Vec3> values;
};

FieldSamples vector_constraints(const SampleSet& samples) {
    FieldSamples fs;
    fs.points.reserve(samples.vector_values.size());
    fs.values.reserve(samples.vector_values.size());
    for (const auto& [idx, v] : samples.vector_values) {
        fs.points.push_back(samples.points[idx]);
        fs.values.push_back(v);
    }
    return fs;
}

/// Per-axis blocks D_a(i, j) = d_a phi_j(p_i) of the gradient system.
std::vector<Eigen::MatrixXd> gradient_blocks(const Kernel& kernel,
                                             const std::vector<Vec3>& points,
                                             const std::vector<Vec3>& centres, int dim) {
    const Eigen::Index t = static_cast<Eigen::Index>(points.size());
    const Eigen::Index k = static_cast<Eigen::Index>(centres.size());
    std::vector<Eigen::MatrixXd> blocks(dim, Eigen::MatrixXd(t, k));
    for (Eigen::Index i = 0; i < t; ++i)
        for (Eigen::Index j = 0; j < k; ++j) {
            Vec3 g = kernel.rbf_gradient(centres[j], points[i]);
            for (int a = 0; a < dim; ++a) blocks[a](i, j) = g[a];
        }
    return blocks;
}

/// Conservative potential: least-squares fit of grad u to the field values,
/// solved as the regularized normal equations of Phi alpha = v.
ScalarPotentialModel fit_conservative(const Kernel& kernel, const std::vector<Vec3>& centres,
                                      int dim, const FieldSamples& fs, double eps,
                                      double* cond_out) {
    auto blocks = gradient_blocks(kernel, fs.points, centres, dim);
    const Eigen::Index t = static_cast<Eigen::Index>(fs.points.size());
    const Eigen::Index k = static_cast<Eigen::Index>(centres.size());
    Eigen::MatrixXd MtM = Eigen::MatrixXd::Zero(k, k);
    Eigen::VectorXd Mtb = Eigen::VectorXd::Zero(k);
    for (int a = 0; a < dim; ++a) {
        MtM.noalias() += blocks[a].transpose() * blocks[a];
        Eigen::VectorXd va(t);
        for (Eigen::Index i = 0; i < t; ++i) va[i] = fs.values[i][a];
        Mtb.noalias() += blocks[a].transpose() * va;
    }
    if (cond_out) *cond_out = condition_estimate(MtM);
    return ScalarPotentialModel(kernel, dim, centres, solve_normal(MtM, Mtb, eps));
}

/// Solenoidal potential: least-squares fit of curl w to the field values.
/// 3D uses the anti-symmetric block layout over three coefficient blocks;
/// 2D reduces to a single scalar stream potential.
VectorPotentialModel fit_solenoidal(const Kernel& kernel, const std::vector<Vec3>& centres,
                                    int dim, const FieldSamples& fs, double eps,
                                    double* cond_out) {
    auto blocks = gradient_blocks(kernel, fs.points, centres, dim);
    const Eigen::Index t = static_cast<Eigen::Index>(fs.points.size());
    const Eigen::Index k = static_cast<Eigen::Index>(centres.size());
    Eigen::VectorXd vx(t), vy(t), vz(t);
    for (Eigen::Index i = 0; i < t; ++i) {
        vx[i] = fs.values[i].x();
        vy[i] = fs.values[i].y();
        vz[i] = fs.values[i].z();
    }

    if (dim == 2) {
        const Eigen::MatrixXd& dx = blocks[0];
        const Eigen::MatrixXd& dy = blocks[1];
        Eigen::MatrixXd AtA = dy.transpose() * dy + dx.transpose() * dx;
        Eigen::VectorXd Atb = dy.transpose() * vx - dx.transpose() * vy;
        if (cond_out) *cond_out = condition_estimate(AtA);
        Eigen::VectorXd alpha = solve_normal(AtA, Atb, eps);
        Eigen::MatrixXd coeffs(1, k);
        coeffs.row(0) = alpha.transpose();
        return VectorPotentialModel(kernel, dim, centres, std::move(coeffs));
    }

    const Eigen::MatrixXd& dx = blocks[0];
    const Eigen::MatrixXd& dy = blocks[1];
    const Eigen::MatrixXd& dz = blocks[2];
    // A = [[0, -Dz, Dy], [Dz, 0, -Dx], [-Dy, Dx, 0]]; assemble AtA blockwise.
    Eigen::MatrixXd AtA(3 * k, 3 * k);
    auto set = [&](int r, int c, const Eigen::MatrixXd& m) {
        AtA.block(r * k, c * k, k, k) = m;
        if (r != c) AtA.block(c * k, r * k, k, k) = m.transpose();
    };
    set(0, 0, Eigen::MatrixXd(dz.transpose() * dz + dy.transpose() * dy));
    set(1, 1, Eigen::MatrixXd(dz.transpose() * dz + dx.transpose() * dx));
    set(2, 2, Eigen::MatrixXd(dy.transpose() * dy + dx.transpose() * dx));
    set(0, 1, Eigen::MatrixXd(-dy.transpose() * dx));
    set(0, 2, Eigen::MatrixXd(-dz.transpose() * dx));
    set(1, 2, Eigen::MatrixXd(-dz.transpose() * dy));

    Eigen::VectorXd Atb(3 * k);
    Atb.segment(0, k) = dz.transpose() * vy - dy.transpose() * vz;
    Atb.segment(k, k) = dx.transpose() * vz - dz.transpose() * vx;
    Atb.segment(2 * k, k) = dy.transpose() * vx - dx.transpose() * vy;

    if (cond_out) *cond_out = condition_estimate(AtA);
    Eigen::VectorXd alpha = solve_normal(AtA, Atb, eps);
    Eigen::MatrixXd coeffs(3, k);
    for (int b = 0; b < 3; ++b) coeffs.row(b) = alpha.segment(b * k, k).transpose();
    return VectorPotentialModel(kernel, dim, centres, std::move(coeffs));
}

std::vector<Vec3> harmonic_residual(const SampleSet& samples,
                                    const ScalarPotentialModel& u,
                                    const VectorPotentialModel& w) {
    std::vector<Vec3> h;
    h.reserve(samples.vector_values.size());
    for (const auto& [idx, v] : samples.vector_values)
        h.push_back(v - u.gradient(samples.points[idx]) - w.curl(samples.points[idx]));
    return h;
}

void fill_energy_diagnostics(const SampleSet& samples, const HHDResult& result,
                             HHDDiagnostics& diag) {
    double v_sq = 0.0, u_sq = 0.0, w_sq = 0.0, h_sq = 0.0, h_max = 0.0;
    std::size_t i = 0;
    for (const auto& [idx, v] : samples.vector_values) {
        v_sq += v.squaredNorm();
        u_sq += result.conservative.gradient(samples.points[idx]).squaredNorm();
        w_sq += result.solenoidal.curl(samples.points[idx]).squaredNorm();
        double hn = result.harmonic_samples[i].norm();
        h_sq += hn * hn;
        h_max = std::max(h_max, hn);
        ++i;
    }
    diag.harmonic_max = h_max;
    diag.harmonic_rms = samples.vector_values.empty()
                            ? 0.0
                            : std::sqrt(h_sq / samples.vector_values.size());
    if (v_sq > 0.0) {
        diag.conservative_energy_fraction = u_sq / v_sq;
        diag.solenoidal_energy_fraction = w_sq / v_sq;
        diag.harmonic_energy_fraction = h_sq / v_sq;
    }
}

void check_config(const SampleSet& samples, const HHDConfig& config) {
    samples.validate();
    if (samples.vector_values.empty()) throw InputError("decomposition needs vector samples");
    auto flags = config.kernel.existence_flags();
    if (!flags.gradient_exists)
        throw ConfigError("decomposition requires a kernel with existing RBF gradient (" +
                          Kernel::family_name(config.kernel.family()) +
                          " fails phi'(0) = 0: " + flags.condition_note + ")");
    if (config.strategy == HHDStrategy::Laplace && !flags.hessian_exists)
        throw ConfigError("Laplace strategy requires a C^2 kernel (Hessian must exist)");
}

std::vector<Vec3> effective_centres(const SampleSet& samples, const HHDConfig& config) {
    if (!config.centres.empty()) return config.centres;
    std::vector<Vec3> centres;
    for (const auto& [idx, v] : samples.vector_values) centres.push_back(samples.points[idx]);
    return centres;
}

}  // namespace

HHDResult decompose_direct(const SampleSet& samples, const HHDConfig& config) {
    check_config(samples, config);
    const int dim = samples.dimension;
    std::vector<Vec3> centres = effective_centres(samples, config);
    FieldSamples fs = vector_constraints(samples);

    HHDDiagnostics diag;
    diag.strategy = "direct";
    ScalarPotentialModel u = fit_conservative(config.kernel, centres, dim, fs, config.epsilon,
                                              &diag.condition_conservative);
    if (config.fit_mode == HHDFitMode::SequentialResidual)
        for (std::size_t i = 0; i < fs.points.size(); ++i)
            fs.values[i] -= u.gradient(fs.points[i]);
    VectorPotentialModel w = fit_solenoidal(config.kernel, centres, dim, fs, config.epsilon,
                                            &diag.condition_solenoidal);

    HHDResult result{std::move(u), std::move(w), {}, std::move(diag)};
    result.harmonic_samples = harmonic_residual(samples, result.conservative, result.solenoidal);
    fill_energy_diagnostics(samples, result, result.diagnostics);
    return result;
}

HHDResult decompose_weighted(const SampleSet& samples, const HHDConfig& config) {
    check_config(samples, config);
    const int dim = samples.dimension;
    std::vector<Vec3> centres = effective_centres(samples, config);

    // Continuous surrogate of the sampled field for the integrands.
    FitConfig surrogate_cfg;
    surrogate_cfg.kernel = config.kernel;
    surrogate_cfg.epsilon = config.epsilon;
    std::vector<ScalarPotentialModel> surrogate = fit_componentwise(samples, surrogate_cfg);

    // Midpoint quadrature on a regular grid over the sample bounding box.
    const int q = config.quadrature;
    const Box box = samples.bounding_box();
    const int nz = dim == 3 ? q : 1;
    const long n_nodes = static_cast<long>(q) * q * nz;
    if (n_nodes < static_cast<long>(centres.size()))
        throw ConfigError("quadrature grid too coarse: fewer nodes than centres");
    FieldSamples qs;
    qs.points.reserve(n_nodes);
    qs.values.reserve(n_nodes);
    for (int iz = 0; iz < nz; ++iz)
        for (int iy = 0; iy < q; ++iy)
            for (int ix = 0; ix < q; ++ix) {
                Vec3 p(box.lo.x() + (box.hi.x() - box.lo.x()) * (ix + 0.5) / q,
                       box.lo.y() + (box.hi.y() - box.lo.y()) * (iy + 0.5) / q,
                       dim == 3 ? box.lo.z() + (box.hi.z() - box.lo.z()) * (iz + 0.5) / q : 0.0);
                qs.points.push_back(p);
                Vec3 v = Vec3::Zero();
                for (int c = 0; c < dim; ++c) v[c] = surrogate[c].eval(p);
                qs.values.push_back(v);
            }

    // The common cell volume scales both sides of each Galerkin system and
    // drops out of the solution, so the node sums are used directly.
    HHDDiagnostics diag;
    diag.strategy = "weighted";
    ScalarPotentialModel u = fit_conservative(config.kernel, centres, dim, qs, config.epsilon,
                                              &diag.condition_conservative);
    if (config.fit_mode == HHDFitMode::SequentialResidual)
        for (std::size_t i = 0; i < qs.points.size(); ++i)
            qs.values[i] -= u.gradient(qs.points[i]);
    VectorPotentialModel w = fit_solenoidal(config.kernel, centres, dim, qs, config.epsilon,
                                            &diag.condition_solenoidal);

    HHDResult result{std::move(u), std::move(w), {}, std::move(diag)};
    result.harmonic_samples = harmonic_residual(samples, result.conservative, result.solenoidal);
    fill_energy_diagnostics(samples, result, result.diagnostics);
    return result;
}

HHDResult decompose_laplace(const SampleSet& samples, const HHDConfig& config) {
    check_config(samples, config);
    const int dim = samples.dimension;
    std::vector<Vec3> centres = effective_centres(samples, config);

    // Interpolating surrogate so div and curl of the field are analytic.
    FitConfig surrogate_cfg;
    surrogate_cfg.kernel = config.kernel;
    surrogate_cfg.epsilon = config.epsilon;
    std::vector<ScalarPotentialModel> surrogate = fit_componentwise(samples, surrogate_cfg);

    FieldSamples fs = vector_constraints(samples);
    const Eigen::Index n = static_cast<Eigen::Index>(fs.points.size());
    const Eigen::Index k = static_cast<Eigen::Index>(centres.size());

    Eigen::MatrixXd L(n, k);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            L(i, j) = config.kernel.rbf_laplacian(centres[j], fs.points[i], dim);
    Eigen::MatrixXd LtL = L.transpose() * L;

    Eigen::VectorXd div(n);
    Eigen::MatrixXd curl(n, dim == 3 ? 3 : 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        DivCurl dc = eval_field_divergence_curl(surrogate, fs.points[i]);
        div[i] = dc.divergence;
        if (dim == 3)
            curl.row(i) = dc.curl.transpose();
        else
            curl(i, 0) = dc.curl.z();
    }

    HHDDiagnostics diag;
    diag.strategy = "laplace";
    diag.condition_conservative = condition_estimate(LtL);
    diag.condition_solenoidal = diag.condition_conservative;

    // Poisson problem Delta u = div v, least squares over the RBF basis. A
    // tenfold-regularization resolve flags when epsilon materially changes
    // the coefficients ("large null space" regime).
    Eigen::VectorXd rhs_u = L.transpose() * div;
    Eigen::VectorXd alpha_u = solve_normal(LtL, rhs_u, config.epsilon);
    if (config.epsilon > 0.0) {
        Eigen::VectorXd alpha_check = solve_normal(LtL, rhs_u, 10.0 * config.epsilon);
        double base = alpha_u.norm();
        if (base > 0.0) diag.regularization_shift = (alpha_u - alpha_check).norm() / base;
    }
    ScalarPotentialModel u(config.kernel, dim, centres, std::move(alpha_u));

    // Componentwise Poisson problems Delta w = -curl v; the sign makes
    // curl w reproduce the solenoidal part (for a divergence-free w,
    // curl curl w = -Delta w).
    const int w_components = dim == 3 ? 3 : 1;
    Eigen::MatrixXd w_coeffs(w_components, k);
    for (int c = 0; c < w_components; ++c)
        w_coeffs.row(c) =
            solve_normal(LtL, Eigen::VectorXd(L.transpose() * (-curl.col(c))), config.epsilon)
                .transpose();
    VectorPotentialModel w(config.kernel, dim, centres, std::move(w_coeffs));

    HHDResult result{std::move(u), std::move(w), {}, std::move(diag)};
    result.harmonic_samples = harmonic_residual(samples, result.conservative, result.solenoidal);
    fill_energy_diagnostics(samples, result, result.diagnostics);
    return result;
}

HHDResult decompose(const SampleSet& samples, const HHDConfig& config) {
    switch (config.strategy) {
        case HHDStrategy::Direct: return decompose_direct(samples, config);
        case HHDStrategy::Weighted: return decompose_weighted(samples, config);
        case HHDStrategy::Laplace: return decompose_laplace(samples, config);
    }
    throw ConfigError("unknown decomposition strategy");
}

ExactnessDiagnostics residual_diagnostics(const HHDResult& result, const SampleSet& samples,
                                          int n_points, unsigned seed) {
    ExactnessDiagnostics d;
    const Box box = samples.bounding_box();
    const int dim = samples.dimension;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const bool hessian_ok = result.conservative.kernel().existence_flags().hessian_exists;
    for (int i = 0; i < n_points && hessian_ok; ++i) {
        Vec3 p;
        for (int a = 0; a < 3; ++a)
            p[a] = a < dim ? box.lo[a] + (box.hi[a] - box.lo[a]) * unit(rng) : 0.0;
        Mat3 h = result.conservative.hessian(p);
        Vec3 curl_grad(h(2, 1) - h(1, 2), h(0, 2) - h(2, 0), h(1, 0) - h(0, 1));
        d.max_curl_of_gradient = std::max(d.max_curl_of_gradient, curl_grad.norm());
        d.max_div_of_curl =
            std::max(d.max_div_of_curl, std::abs(result.solenoidal.curl_divergence(p)));
    }
    double h_sq = 0.0;
    std::size_t i = 0;
    for (const auto& [idx, v] : samples.vector_values) {
        const Vec3& h = result.harmonic_samples[i];
        d.harmonic_max = std::max(d.harmonic_max, h.norm());
        h_sq += h.squaredNorm();
        Vec3 recon = result.conservative.gradient(samples.points[idx]) +
                     result.solenoidal.curl(samples.points[idx]) + h;
        d.reconstruction_max_error = std::max(d.reconstruction_max_error, (v - recon).norm());
        ++i;
    }
    if (i > 0) d.harmonic_rms = std::sqrt(h_sq / static_cast<double>(i));
    d.conservative_energy_fraction = result.diagnostics.conservative_energy_fraction;
    d.solenoidal_energy_fraction = result.diagnostics.solenoidal_energy_fraction;
    d.harmonic_energy_fraction = result.diagnostics.harmonic_energy_fraction;
    return d;
}

std::string to_string(const ExactnessDiagnostics& d) {
    std::ostringstream os;
    os << "max |curl(grad u)|        " << d.max_curl_of_gradient << '\n'
       << "max |div(curl w)|         " << d.max_div_of_curl << '\n'
       << "harmonic max |h|          " << d.harmonic_max << '\n'
       << "harmonic rms |h|          " << d.harmonic_rms << '\n'
       << "reconstruction max error  " << d.reconstruction_max_error << '\n'
       << "energy fraction grad u    " << d.conservative_energy_fraction << '\n'
       << "energy fraction curl w    " << d.solenoidal_energy_fraction << '\n'
       << "energy fraction h         " << d.harmonic_energy_fraction << '\n';
    return os.str();
}

}  // namespace meshfield

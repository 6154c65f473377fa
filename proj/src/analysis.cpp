#include "meshfield/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "meshfield/linalg.hpp"

namespace meshfield {

MetricsReport compute_metrics(const std::vector<Vec3>& reference,
                              const std::vector<Vec3>& candidate, int dimension,
                              const std::vector<double>& thresholds) {
    if (reference.size() != candidate.size())
        throw InputError("metric inputs must have equal lengths");
    if (reference.empty()) throw InputError("metric inputs are empty");
    const std::size_t n = reference.size();

    MetricsReport m;
    double nc_sum = 0.0, nrmse_sum = 0.0;
    int nc_count = 0, nrmse_count = 0;
    for (int c = 0; c < dimension; ++c) {
        double r_mean = 0.0, a_mean = 0.0;
        double r_min = reference[0][c], r_max = reference[0][c];
        for (std::size_t i = 0; i < n; ++i) {
            r_mean += reference[i][c];
            a_mean += candidate[i][c];
            r_min = std::min(r_min, reference[i][c]);
            r_max = std::max(r_max, reference[i][c]);
        }
        r_mean /= n;
        a_mean /= n;
        double cov = 0.0, r_var = 0.0, a_var = 0.0, sq_err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double dr = reference[i][c] - r_mean;
            double da = candidate[i][c] - a_mean;
            cov += dr * da;
            r_var += dr * dr;
            a_var += da * da;
            double e = candidate[i][c] - reference[i][c];
            sq_err += e * e;
        }
        if (r_var > 0.0 && a_var > 0.0) {
            nc_sum += cov / std::sqrt(r_var * a_var);
            ++nc_count;
        } else {
            m.degenerate = true;
        }
        double range = r_max - r_min;
        if (range > 0.0) {
            nrmse_sum += std::sqrt(sq_err / n) / range;
            ++nrmse_count;
        } else {
            m.degenerate = true;
        }
    }
    m.nc = nc_count > 0 ? nc_sum / nc_count : 0.0;
    m.nrmse = nrmse_count > 0 ? nrmse_sum / nrmse_count : 0.0;

    double ref_scale = 0.0;
    for (const Vec3& r : reference) ref_scale = std::max(ref_scale, r.norm());
    double angle_sum = 0.0;
    int angle_count = 0;
    std::vector<double> errors(n);
    for (std::size_t i = 0; i < n; ++i) {
        double diff = (candidate[i] - reference[i]).norm();
        errors[i] = ref_scale > 0.0 ? diff / ref_scale : diff;
        m.linf = std::max(m.linf, errors[i]);
        double rn = reference[i].norm(), cn = candidate[i].norm();
        if (rn > 1e-12 && cn > 1e-12) {
            double cosv = std::clamp(reference[i].dot(candidate[i]) / (rn * cn), -1.0, 1.0);
            double deg = std::acos(cosv) * 180.0 / std::acos(-1.0);
            angle_sum += deg;
            m.max_angle_deg = std::max(m.max_angle_deg, deg);
            ++angle_count;
        }
    }
    m.mean_angle_deg = angle_count > 0 ? angle_sum / angle_count : 0.0;
    for (double k : thresholds) {
        std::size_t below = 0;
        for (double e : errors)
            if (e < k) ++below;
        m.percentiles[k] = static_cast<double>(below) / n;
    }
    return m;
}

std::string to_string(const MetricsReport& m) {
    std::ostringstream os;
    os << "NC      " << m.nc << '\n' << "NRMSE   " << m.nrmse << '\n';
    for (const auto& [k, frac] : m.percentiles)
        os << "P_" << k << "   " << 100.0 * frac << "%\n";
    os << "mean angle [deg]  " << m.mean_angle_deg << '\n'
       << "max angle [deg]   " << m.max_angle_deg << '\n'
       << "linf              " << m.linf << '\n';
    if (m.degenerate) os << "warning: zero-variance reference, NC/NRMSE partial\n";
    return os.str();
}

namespace {

double kernel_d1_sup(const Kernel& kernel, double diameter) {
    // Supremum of |phi'| sampled over [0, diameter].
    const int n = 20000;
    double sup = 0.0;
    for (int i = 0; i <= n; ++i) {
        double r = diameter * i / n;
        try {
            sup = std::max(sup, std::abs(kernel.eval_d1(r)));
        } catch (const CentreSingularityError&) {
            // r = 0 undefined for some kernels; the supremum over r > 0 applies.
        }
    }
    return sup;
}

double data_diameter(const std::vector<Vec3>& pts, const std::vector<Vec3>& centres) {
    Box box;
    bool first = true;
    for (const auto* v : {&pts, &centres})
        for (const Vec3& p : *v) {
            if (first) {
                box.lo = box.hi = p;
                first = false;
            }
            box.lo = box.lo.cwiseMin(p);
            box.hi = box.hi.cwiseMax(p);
        }
    return box.diameter();
}

}  // namespace

double gradient_stability_bound(const ScalarPotentialModel& model,
                                const std::vector<Vec3>& sample_points, double noise_norm) {
    const auto& centres = model.centres();
    const int dim = model.dimension();
    const Eigen::Index t = static_cast<Eigen::Index>(sample_points.size());
    const Eigen::Index k = static_cast<Eigen::Index>(centres.size());
    Eigen::MatrixXd phi(dim * t, k);
    for (Eigen::Index i = 0; i < t; ++i)
        for (Eigen::Index j = 0; j < k; ++j) {
            Vec3 g = model.kernel().rbf_gradient(centres[j], sample_points[i]);
            for (int a = 0; a < dim; ++a) phi(a * t + i, j) = g[a];
        }
    double smin = smallest_singular_value(phi);
    if (smin <= 0.0)
        throw NumericalError("gradient system is singular; stability bound undefined",
                             std::numeric_limits<double>::infinity());
    double d1_sup = kernel_d1_sup(model.kernel(), data_diameter(sample_points, centres));
    return std::sqrt(static_cast<double>(k)) * d1_sup / smin * noise_norm;
}

double rotor_stability_bound(const VectorPotentialModel& model,
                             const std::vector<Vec3>& sample_points, double noise_norm) {
    const auto& centres = model.centres();
    const int dim = model.dimension();
    const Eigen::Index t = static_cast<Eigen::Index>(sample_points.size());
    const Eigen::Index k = static_cast<Eigen::Index>(centres.size());
    Eigen::MatrixXd A;
    if (dim == 3) {
        A = Eigen::MatrixXd::Zero(3 * t, 3 * k);
        for (Eigen::Index i = 0; i < t; ++i)
            for (Eigen::Index j = 0; j < k; ++j) {
                Vec3 g = model.kernel().rbf_gradient(centres[j], sample_points[i]);
                A(0 * t + i, 1 * k + j) = -g.z();
                A(0 * t + i, 2 * k + j) = g.y();
                A(1 * t + i, 0 * k + j) = g.z();
                A(1 * t + i, 2 * k + j) = -g.x();
                A(2 * t + i, 0 * k + j) = -g.y();
                A(2 * t + i, 1 * k + j) = g.x();
            }
    } else {
        A = Eigen::MatrixXd(2 * t, k);
        for (Eigen::Index i = 0; i < t; ++i)
            for (Eigen::Index j = 0; j < k; ++j) {
                Vec3 g = model.kernel().rbf_gradient(centres[j], sample_points[i]);
                A(i, j) = g.y();
                A(t + i, j) = -g.x();
            }
    }
    double smin = smallest_singular_value(A);
    if (smin <= 0.0)
        throw NumericalError("rotor system is singular; stability bound undefined",
                             std::numeric_limits<double>::infinity());
    double d1_sup = kernel_d1_sup(model.kernel(), data_diameter(sample_points, centres));
    return std::sqrt(6.0 * static_cast<double>(k)) * d1_sup / smin * noise_norm;
}

SampleSet add_noise(const SampleSet& samples, double relative_level, unsigned seed) {
    if (relative_level < 0.0) throw ConfigError("noise level must be nonnegative");
    SampleSet out = samples;
    if (relative_level == 0.0 || samples.vector_values.empty()) return out;
    const int dim = samples.dimension;
    Vec3 rms = Vec3::Zero();
    for (const auto& [idx, v] : samples.vector_values)
        for (int c = 0; c < dim; ++c) rms[c] += v[c] * v[c];
    for (int c = 0; c < dim; ++c)
        rms[c] = std::sqrt(rms[c] / samples.vector_values.size());
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& [idx, v] : out.vector_values)
        for (int c = 0; c < dim; ++c) v[c] += relative_level * rms[c] * gauss(rng);
    return out;
}

std::string to_string(CriticalPointType t) {
    switch (t) {
        case CriticalPointType::Minimum: return "minimum";
        case CriticalPointType::Maximum: return "maximum";
        case CriticalPointType::Saddle: return "saddle";
        case CriticalPointType::Degenerate: return "degenerate";
    }
    return "unknown";
}

namespace {

CriticalPointType classify(const Eigen::VectorXd& eigenvalues) {
    double max_abs = eigenvalues.cwiseAbs().maxCoeff();
    if (max_abs == 0.0) return CriticalPointType::Degenerate;
    int pos = 0, neg = 0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        if (std::abs(eigenvalues[i]) < 1e-8 * max_abs) return CriticalPointType::Degenerate;
        (eigenvalues[i] > 0 ? pos : neg)++;
    }
    if (neg == 0) return CriticalPointType::Minimum;
    if (pos == 0) return CriticalPointType::Maximum;
    return CriticalPointType::Saddle;
}

/// Dogleg step for the model m(s) = 1/2 |F + H s|^2 within `radius`.
Eigen::VectorXd dogleg_step(const Eigen::VectorXd& F, const Eigen::MatrixXd& H,
                            double radius) {
    Eigen::VectorXd g = H * F;  // gradient of the merit function (H symmetric)
    double g_sq = g.squaredNorm();
    Eigen::VectorXd Hg = H * g;
    double cauchy_t = Hg.squaredNorm() > 0.0 ? g_sq / Hg.squaredNorm() : 0.0;
    Eigen::VectorXd s_cauchy = -cauchy_t * g;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(H);
    if (!lu.isInvertible()) {
        if (s_cauchy.norm() > radius && s_cauchy.norm() > 0.0)
            return s_cauchy * (radius / s_cauchy.norm());
        return s_cauchy;
    }
    Eigen::VectorXd s_newton = lu.solve(-F);
    if (s_newton.norm() <= radius) return s_newton;
    if (s_cauchy.norm() >= radius) {
        return s_cauchy.norm() > 0.0 ? Eigen::VectorXd(s_cauchy * (radius / s_cauchy.norm()))
                                     : s_cauchy;
    }
    // Walk from the Cauchy point toward the Newton point to the radius.
    Eigen::VectorXd d = s_newton - s_cauchy;
    double a = d.squaredNorm();
    double b = 2.0 * s_cauchy.dot(d);
    double c = s_cauchy.squaredNorm() - radius * radius;
    double tau = (-b + std::sqrt(std::max(0.0, b * b - 4 * a * c))) / (2 * a);
    return s_cauchy + tau * d;
}

}  // namespace

std::vector<CriticalPoint> find_critical_points(const ScalarPotentialModel& model,
                                                const std::vector<Vec3>& guesses,
                                                const CriticalPointOptions& options) {
    if (!model.kernel().existence_flags().hessian_exists)
        throw ConfigError("critical-point classification requires a kernel with a Hessian");
    const int d = model.dimension();

    auto grad_at = [&](const Vec3& p) {
        Vec3 g = model.gradient(p);
        Eigen::VectorXd out(d);
        for (int a = 0; a < d; ++a) out[a] = g[a];
        return out;
    };
    auto hess_at = [&](const Vec3& p) {
        Mat3 h = model.hessian(p);
        return Eigen::MatrixXd(h.topLeftCorner(d, d));
    };

    std::vector<CriticalPoint> found;
    for (const Vec3& guess : guesses) {
        CriticalPoint cp;
        cp.location = guess;
        cp.path.push_back(guess);
        Vec3 p = guess;
        double radius = 1.0;
        bool singular = false;

        Eigen::VectorXd F = grad_at(p);
        cp.trace.push_back(F.norm());
        for (int iter = 0; iter < options.max_iterations; ++iter) {
            if (F.norm() <= options.tolerance) {
                cp.converged = true;
                break;
            }
            Eigen::MatrixXd H;
            try {
                H = hess_at(p);
            } catch (const CentreSingularityError&) {
                singular = true;
                break;
            }
            Eigen::VectorXd s = dogleg_step(F, H, radius);
            if (s.norm() < 1e-300) break;

            Vec3 p_new = p;
            for (int a = 0; a < d; ++a) p_new[a] += s[a];
            Eigen::VectorXd F_new = grad_at(p_new);

            double actual = 0.5 * (F.squaredNorm() - F_new.squaredNorm());
            Eigen::VectorXd model_res = F + H * s;
            double predicted = 0.5 * (F.squaredNorm() - model_res.squaredNorm());
            double rho = predicted > 0.0 ? actual / predicted : -1.0;

            if (rho > 0.1) {
                p = p_new;
                F = F_new;
                cp.path.push_back(p);
                cp.trace.push_back(F.norm());
            }
            if (rho > 0.75 && s.norm() > 0.8 * radius)
                radius *= 2.0;
            else if (rho < 0.25)
                radius *= 0.25;
            cp.iterations = iter + 1;
        }
        if (F.norm() <= options.tolerance) cp.converged = true;
        cp.location = p;
        cp.gradient_norm = F.norm();
        if (singular) cp.converged = false;
        if (!cp.converged) {
            found.push_back(std::move(cp));
            continue;
        }
        if (options.restrict_to_box && !options.box.contains(p, d)) continue;

        Eigen::MatrixXd H_class;
        try {
            H_class = hess_at(p);
        } catch (const CentreSingularityError&) {
            // Converged exactly onto a centre; classify from a point nudged off
            // the singular evaluation location.
            Vec3 nudged = p;
            for (int a = 0; a < d; ++a) nudged[a] += 1e-9 * (1.0 + std::abs(p[a]));
            H_class = hess_at(nudged);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H_class);
        cp.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + d);
        cp.classification = classify(es.eigenvalues());
        found.push_back(std::move(cp));
    }

    // Deduplicate converged points, keeping the best-converged representative.
    std::vector<CriticalPoint> result;
    for (auto& cp : found) {
        if (!cp.converged) {
            result.push_back(std::move(cp));
            continue;
        }
        bool merged = false;
        for (auto& existing : result) {
            if (existing.converged &&
                (existing.location - cp.location).norm() < options.merge_distance) {
                if (cp.gradient_norm < existing.gradient_norm) existing = cp;
                merged = true;
                break;
            }
        }
        if (!merged) result.push_back(std::move(cp));
    }
    return result;
}

std::vector<Vec3> default_critical_point_guesses(const Box& box, int dimension, int per_axis) {
    std::vector<Vec3> guesses;
    const int nz = dimension == 3 ? per_axis : 1;
    for (int iz = 0; iz < nz; ++iz)
        for (int iy = 0; iy < per_axis; ++iy)
            for (int ix = 0; ix < per_axis; ++ix) {
                Vec3 p(box.lo.x() + (box.hi.x() - box.lo.x()) * (ix + 0.5) / per_axis,
                       box.lo.y() + (box.hi.y() - box.lo.y()) * (iy + 0.5) / per_axis,
                       dimension == 3
                           ? box.lo.z() + (box.hi.z() - box.lo.z()) * (iz + 0.5) / per_axis
                           : 0.0);
                guesses.push_back(p);
            }
    return guesses;
}

}  // namespace meshfield

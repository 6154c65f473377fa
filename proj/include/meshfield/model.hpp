#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "meshfield/kernel.hpp"
#include "meshfield/types.hpp"

namespace meshfield {

/// Fitted scalar potential u(p) = sum_i alpha_i phi(|p - c_i|).
/// Immutable after fitting; evaluation is pure and thread-safe.
class ScalarPotentialModel {
public:
    ScalarPotentialModel(Kernel kernel, int dimension, std::vector<Vec3> centres,
                         Eigen::VectorXd coefficients);

    const Kernel& kernel() const { return kernel_; }
    int dimension() const { return dim_; }
    const std::vector<Vec3>& centres() const { return centres_; }
    const Eigen::VectorXd& coefficients() const { return coeffs_; }

    double eval(const Vec3& p) const;
    Vec3 gradient(const Vec3& p) const;
    Mat3 hessian(const Vec3& p) const;
    double laplacian(const Vec3& p) const;

    std::string to_json() const;
    static ScalarPotentialModel from_json(const std::string& text);
    void save(const std::string& path) const;
    static ScalarPotentialModel load(const std::string& path);

private:
    Kernel kernel_;
    int dim_;
    std::vector<Vec3> centres_;
    Eigen::VectorXd coeffs_;
};

/// Fitted vector potential w(p). For d == 3 three coefficient blocks
/// (one per component of w); for d == 2 a single scalar stream potential
/// with planar rotor (d_y w, -d_x w).
class VectorPotentialModel {
public:
    /// `coefficients` has one row per potential component (3 for 3D, 1 for 2D)
    /// and one column per centre.
    VectorPotentialModel(Kernel kernel, int dimension, std::vector<Vec3> centres,
                         Eigen::MatrixXd coefficients);

    const Kernel& kernel() const { return kernel_; }
    int dimension() const { return dim_; }
    const std::vector<Vec3>& centres() const { return centres_; }
    const Eigen::MatrixXd& coefficients() const { return coeffs_; }

    /// w(p); for 2D the stream potential goes into component 0.
    Vec3 eval_potential(const Vec3& p) const;
    /// The rotor of w at p.
    Vec3 curl(const Vec3& p) const;
    /// Analytic divergence of the rotor field (zero up to rounding).
    double curl_divergence(const Vec3& p) const;

    std::string to_json() const;
    static VectorPotentialModel from_json(const std::string& text);
    void save(const std::string& path) const;
    static VectorPotentialModel load(const std::string& path);

private:
    Kernel kernel_;
    int dim_;
    std::vector<Vec3> centres_;
    Eigen::MatrixXd coeffs_;
};

/// Divergence and curl of a componentwise-interpolated field, from the
/// analytic partials of the per-component models. For d == 2 only the z
/// entry of the returned curl is meaningful.
struct DivCurl {
    double divergence;
    Vec3 curl;
};
DivCurl eval_field_divergence_curl(const std::vector<ScalarPotentialModel>& components,
                                   const Vec3& p);

}  // namespace meshfield

#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace meshfield {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Axis-aligned bounding box. For 2D data the z extent is degenerate (lo.z == hi.z == 0).
struct Box {
    Vec3 lo{0, 0, 0};
    Vec3 hi{0, 0, 0};

    bool contains(const Vec3& p, int dim) const {
        for (int a = 0; a < dim; ++a)
            if (p[a] < lo[a] || p[a] > hi[a]) return false;
        return true;
    }

    double diameter() const { return (hi - lo).norm(); }

    Box padded(double frac) const {
        Vec3 margin = (hi - lo) * frac;
        return Box{lo - margin, hi + margin};
    }
};

/// Invalid configuration (bad kernel parameters, incompatible strategy, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or inconsistent input data.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Derivative evaluation at an RBF centre where the limit is undefined
/// or direction-dependent.
struct CentreSingularityError : std::runtime_error {
    explicit CentreSingularityError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Solver breakdown (singular system without regularization, ...).
struct NumericalError : std::runtime_error {
    double condition_estimate;
    NumericalError(const std::string& msg, double cond)
        : std::runtime_error(msg), condition_estimate(cond) {}
};

}  // namespace meshfield

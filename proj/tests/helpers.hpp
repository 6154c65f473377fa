#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "meshfield/analytic.hpp"
#include "meshfield/sample_set.hpp"
#include "meshfield/types.hpp"

namespace testing {

using meshfield::Box;
using meshfield::Vec3;

inline std::vector<Vec3> random_points(const Box& box, int dim, int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Vec3> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        Vec3 p = Vec3::Zero();
        for (int a = 0; a < dim; ++a) p[a] = box.lo[a] + (box.hi[a] - box.lo[a]) * unit(rng);
        pts.push_back(p);
    }
    return pts;
}

/// Central finite difference of a scalar function of one variable.
template <typename F>
double fd1(F&& f, double r, double h = 1e-5) {
    return (f(r + h) - f(r - h)) / (2.0 * h);
}

template <typename F>
double fd2(F&& f, double r, double h = 1e-4) {
    return (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h);
}

/// Central finite-difference gradient of a scalar field.
template <typename F>
Vec3 fd_gradient(F&& f, const Vec3& p, int dim, double h = 1e-6) {
    Vec3 g = Vec3::Zero();
    for (int a = 0; a < dim; ++a) {
        Vec3 hi = p, lo = p;
        hi[a] += h;
        lo[a] -= h;
        g[a] = (f(hi) - f(lo)) / (2.0 * h);
    }
    return g;
}

/// Central finite-difference curl of a 3D vector field.
template <typename F>
Vec3 fd_curl(F&& f, const Vec3& p, double h = 1e-6) {
    auto d = [&](int comp, int axis) {
        Vec3 hi = p, lo = p;
        hi[axis] += h;
        lo[axis] -= h;
        return (f(hi)[comp] - f(lo)[comp]) / (2.0 * h);
    };
    return Vec3(d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1));
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

/// Scattered sampling of a conservative field with the given fractions of
/// scalar and (possibly overlapping) vector constraints.
inline meshfield::SampleSet sample_mixed(const meshfield::AnalyticField& field, int n,
                                         double scalar_frac, double vector_frac,
                                         unsigned seed) {
    meshfield::SampleSet s;
    s.dimension = field.dimension;
    s.points = random_points(field.domain, field.dimension, n, seed);
    std::mt19937 rng(seed + 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        bool any = false;
        if (unit(rng) < scalar_frac) {
            s.scalar_values.emplace_back(i, field.potential_u(s.points[i]));
            any = true;
        }
        if (unit(rng) < vector_frac) {
            s.vector_values.emplace_back(i, field.gradient_u(s.points[i]));
            any = true;
        }
        if (!any) s.scalar_values.emplace_back(i, field.potential_u(s.points[i]));
    }
    return s;
}

}  // namespace testing

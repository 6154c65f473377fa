#pragma once

#include <functional>
#include <string>
#include <vector>

#include "meshfield/sample_set.hpp"
#include "meshfield/types.hpp"

namespace meshfield {

/// Closed-form ground-truth field used by tests and acceptance runs.
/// `potential_u` / `potential_w` are null when the field has no analytic
/// potential of that kind.
struct AnalyticField {
    std::string name;
    int dimension = 2;
    Box domain;
    std::function<double(const Vec3&)> potential_u;       // may be null
    std::function<Vec3(const Vec3&)> gradient_u;          // may be null
    std::function<Vec3(const Vec3&)> potential_w;         // may be null (2D: stream in x)
    std::function<Vec3(const Vec3&)> curl_w;              // may be null
    std::function<Vec3(const Vec3&)> field;               // v(p), always present
    /// Known zeros of gradient_u inside the domain (oracle-verified).
    std::vector<Vec3> critical_points;
};

/// Registry: "u1", "u2", "u3", "fig8", "sincos", "bump", "rigid".
AnalyticField make_analytic_field(const std::string& name);
std::vector<std::string> analytic_field_names();

/// Samples `field.field` on a regular per-axis grid over the field's domain,
/// emitting vector constraints at every node.
SampleSet sample_field_grid(const AnalyticField& field, int per_axis);

}  // namespace meshfield

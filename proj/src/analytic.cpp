#include "meshfield/analytic.hpp"

#include <cmath>

namespace meshfield {

namespace {

const double kPi = std::acos(-1.0);

Box box2(double lo, double hi) { return Box{Vec3(lo, lo, 0), Vec3(hi, hi, 0)}; }
Box box3(double lo, double hi) { return Box{Vec3(lo, lo, lo), Vec3(hi, hi, hi)}; }

AnalyticField conservative_2d(std::string name, Box domain,
                              std::function<double(const Vec3&)> u,
                              std::function<Vec3(const Vec3&)> grad) {
    AnalyticField f;
    f.name = std::move(name);
    f.dimension = 2;
    f.domain = domain;
    f.potential_u = u;
    f.gradient_u = grad;
    f.field = grad;
    return f;
}

}  // namespace

AnalyticField make_analytic_field(const std::string& name) {
    if (name == "u1") {
        return conservative_2d(
            "u1", box2(-1, 1), [](const Vec3& p) { return p.x() * p.x() - p.y() * p.y(); },
            [](const Vec3& p) { return Vec3(2 * p.x(), -2 * p.y(), 0); });
    }
    if (name == "u2") {
        return conservative_2d(
            "u2", box2(-1, 1),
            [](const Vec3& p) { return p.x() * p.x() - p.y() * p.y() * p.y(); },
            [](const Vec3& p) { return Vec3(2 * p.x(), -3 * p.y() * p.y(), 0); });
    }
    if (name == "u3") {
        return conservative_2d(
            "u3", box2(-1, 1),
            [](const Vec3& p) {
                return p.x() * p.x() + std::exp(-p.x() * p.y()) + p.y() * p.y() * p.y();
            },
            [](const Vec3& p) {
                double e = std::exp(-p.x() * p.y());
                return Vec3(2 * p.x() - p.y() * e, 3 * p.y() * p.y() - p.x() * e, 0);
            });
    }
    if (name == "sincos") {
        AnalyticField f = conservative_2d(
            "sincos", box2(-2 * kPi, 2 * kPi),
            [](const Vec3& p) { return std::sin(p.x()) * std::cos(p.y()); },
            [](const Vec3& p) {
                return Vec3(std::cos(p.x()) * std::cos(p.y()),
                            -std::sin(p.x()) * std::sin(p.y()), 0);
            });
        // The gradient vanishes at (pi/2 + k pi, m pi) and (k pi, pi/2 + m pi),
        // not on the integer lattice (pi i, pi j).
        for (int k = -2; k <= 1; ++k)
            for (int m = -2; m <= 2; ++m)
                f.critical_points.emplace_back(kPi / 2 + k * kPi, m * kPi, 0);
        for (int k = -2; k <= 2; ++k)
            for (int m = -2; m <= 1; ++m)
                f.critical_points.emplace_back(k * kPi, kPi / 2 + m * kPi, 0);
        return f;
    }
    if (name == "bump") {
        AnalyticField f = conservative_2d(
            "bump", box2(-2, 2),
            [](const Vec3& p) {
                return p.x() * std::exp(-(p.x() * p.x() + p.y() * p.y()));
            },
            [](const Vec3& p) {
                double e = std::exp(-(p.x() * p.x() + p.y() * p.y()));
                return Vec3((1 - 2 * p.x() * p.x()) * e, -2 * p.x() * p.y() * e, 0);
            });
        const double s = 1.0 / std::sqrt(2.0);
        f.critical_points = {Vec3(s, 0, 0), Vec3(-s, 0, 0)};
        return f;
    }
    if (name == "rigid") {
        AnalyticField f;
        f.name = "rigid";
        f.dimension = 2;
        f.domain = box2(-1, 1);
        f.potential_w = [](const Vec3& p) {
            return Vec3(-(p.x() * p.x() + p.y() * p.y()) / 2, 0, 0);
        };
        f.curl_w = [](const Vec3& p) { return Vec3(-p.y(), p.x(), 0); };
        f.field = f.curl_w;
        return f;
    }
    if (name == "fig8") {
        AnalyticField f;
        f.name = "fig8";
        f.dimension = 3;
        f.domain = box3(-1, 1);
        f.potential_u = [](const Vec3& p) {
            return p.x() * p.x() - 2 * p.x() * p.z() + p.y() * p.z();
        };
        f.gradient_u = [](const Vec3& p) {
            return Vec3(2 * p.x() - 2 * p.z(), p.z(), -2 * p.x() + p.y());
        };
        f.potential_w = [](const Vec3& p) {
            return Vec3(p.x() * p.x() * p.y() * p.z(), p.x() * p.y() * std::exp(-p.z()),
                        p.x() * p.x() + p.y() * p.y() - p.z() * p.z());
        };
        f.curl_w = [](const Vec3& p) {
            double e = std::exp(-p.z());
            return Vec3(2 * p.y() + p.x() * p.y() * e, p.x() * p.x() * p.y() - 2 * p.x(),
                        p.y() * e - p.x() * p.x() * p.z());
        };
        f.field = [grad = f.gradient_u, curl = f.curl_w](const Vec3& p) {
            return Vec3(grad(p) + curl(p));
        };
        return f;
    }
    throw InputError("unknown analytic field: " + name);
}

std::vector<std::string> analytic_field_names() {
    return {"u1", "u2", "u3", "sincos", "bump", "rigid", "fig8"};
}

SampleSet sample_field_grid(const AnalyticField& field, int per_axis) {
    if (per_axis < 2) throw InputError("grid sampling needs at least 2 nodes per axis");
    SampleSet s;
    s.dimension = field.dimension;
    const Box& box = field.domain;
    auto coord = [&](int axis, int i) {
        return box.lo[axis] + (box.hi[axis] - box.lo[axis]) * i / (per_axis - 1);
    };
    const int nz = field.dimension == 3 ? per_axis : 1;
    for (int iz = 0; iz < nz; ++iz)
        for (int iy = 0; iy < per_axis; ++iy)
            for (int ix = 0; ix < per_axis; ++ix) {
                Vec3 p(coord(0, ix), coord(1, iy), field.dimension == 3 ? coord(2, iz) : 0.0);
                int idx = static_cast<int>(s.points.size());
                s.points.push_back(p);
                s.vector_values.emplace_back(idx, field.field(p));
            }
    return s;
}

}  // namespace meshfield

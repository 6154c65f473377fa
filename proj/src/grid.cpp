#include "meshfield/grid.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace meshfield {

void GridSpec::validate() const {
    const int active = dimension == 3 ? 3 : 2;
    for (int a = 0; a < active; ++a)
        if (resolution[a] < 2)
            throw ConfigError("grid resolution must be at least 2 per axis");
    if (dimension == 2 && resolution[2] != 1)
        throw ConfigError("a 2D grid must have z resolution 1");
}

std::size_t GridSpec::node_count() const {
    return static_cast<std::size_t>(resolution[0]) * resolution[1] * resolution[2];
}

Vec3 GridSpec::node(int ix, int iy, int iz) const {
    auto coord = [&](int i, int axis) {
        if (resolution[axis] == 1) return box.lo[axis];
        return box.lo[axis] +
               (box.hi[axis] - box.lo[axis]) * i / static_cast<double>(resolution[axis] - 1);
    };
    return Vec3(coord(ix, 0), coord(iy, 1), coord(iz, 2));
}

Vec3 GridSpec::spacing() const {
    Vec3 s;
    for (int a = 0; a < 3; ++a)
        s[a] = resolution[a] > 1 ? (box.hi[a] - box.lo[a]) / (resolution[a] - 1) : 1.0;
    return s;
}

namespace {

template <typename ScalarFn, typename VectorFn>
GridField eval_grid_impl(const GridSpec& spec, ScalarFn scalar, VectorFn vector,
                         bool with_scalars) {
    spec.validate();
    GridField grid;
    grid.spec = spec;
    grid.points.reserve(spec.node_count());
    grid.vectors.reserve(spec.node_count());
    if (with_scalars) grid.scalars.reserve(spec.node_count());
    for (int iz = 0; iz < spec.resolution[2]; ++iz)
        for (int iy = 0; iy < spec.resolution[1]; ++iy)
            for (int ix = 0; ix < spec.resolution[0]; ++ix) {
                Vec3 p = spec.node(ix, iy, iz);
                grid.points.push_back(p);
                grid.vectors.push_back(vector(p));
                if (with_scalars) grid.scalars.push_back(scalar(p));
            }
    return grid;
}

}  // namespace

GridField eval_grid(const ScalarPotentialModel& model, const GridSpec& spec) {
    return eval_grid_impl(
        spec, [&](const Vec3& p) { return model.eval(p); },
        [&](const Vec3& p) { return model.gradient(p); }, true);
}

GridField eval_grid(const std::function<Vec3(const Vec3&)>& field, const GridSpec& spec) {
    return eval_grid_impl(spec, [](const Vec3&) { return 0.0; }, field, false);
}

FootprintReport footprint(std::size_t centre_count, int dimension, const GridSpec& spec) {
    FootprintReport r;
    r.model_numbers = centre_count * (dimension + 1);
    r.grid_numbers = spec.node_count() * dimension;
    r.compression_ratio = static_cast<double>(r.model_numbers) / r.grid_numbers;
    r.centre_point_ratio = static_cast<double>(centre_count) / spec.node_count();
    return r;
}

namespace {

std::string fmt9(double x) {
    std::ostringstream os;
    os.precision(9);
    os << x;
    return os.str();
}

}  // namespace

void write_grid_csv(std::ostream& out, const GridField& grid) {
    const int d = grid.spec.dimension;
    out << (d == 3 ? "x,y,z" : "x,y");
    if (!grid.scalars.empty()) out << ",f";
    out << (d == 3 ? ",vx,vy,vz" : ",vx,vy") << '\n';
    out.precision(17);
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
        out << grid.points[i].x() << ',' << grid.points[i].y();
        if (d == 3) out << ',' << grid.points[i].z();
        if (!grid.scalars.empty()) out << ',' << grid.scalars[i];
        for (int a = 0; a < d; ++a) out << ',' << grid.vectors[i][a];
        out << '\n';
    }
}

void write_grid_vtk(std::ostream& out, const GridField& grid, const std::string& title) {
    const GridSpec& s = grid.spec;
    Vec3 sp = s.spacing();
    out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\n";
    out << "DATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << s.resolution[0] << ' ' << s.resolution[1] << ' ' << s.resolution[2]
        << '\n';
    out << "ORIGIN " << fmt9(s.box.lo.x()) << ' ' << fmt9(s.box.lo.y()) << ' '
        << fmt9(s.box.lo.z()) << '\n';
    out << "SPACING " << fmt9(sp.x()) << ' ' << fmt9(sp.y()) << ' ' << fmt9(sp.z()) << '\n';
    out << "POINT_DATA " << grid.points.size() << '\n';
    if (!grid.scalars.empty()) {
        out << "SCALARS potential double 1\nLOOKUP_TABLE default\n";
        for (double v : grid.scalars) out << fmt9(v) << '\n';
    }
    if (!grid.vectors.empty()) {
        out << "VECTORS field double\n";
        for (const Vec3& v : grid.vectors)
            out << fmt9(v.x()) << ' ' << fmt9(v.y()) << ' ' << fmt9(v.z()) << '\n';
    }
}

void write_grid_vtk_file(const std::string& path, const GridField& grid,
                         const std::string& title) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open '" + path + "' for writing");
    write_grid_vtk(out, grid, title);
}

namespace {

std::vector<Vec3> trace_one(const std::function<Vec3(const Vec3&)>& field, Vec3 p,
                            double h, int max_steps, const Box& box, int dim) {
    std::vector<Vec3> pts{p};
    for (int step = 0; step < max_steps; ++step) {
        Vec3 k1 = field(p);
        if (k1.norm() < 1e-12) break;
        Vec3 k2 = field(p + 0.5 * h * k1);
        Vec3 k3 = field(p + 0.5 * h * k2);
        Vec3 k4 = field(p + h * k3);
        Vec3 next = p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (dim == 2) next.z() = p.z();
        if (!box.contains(next, dim)) break;
        p = next;
        pts.push_back(p);
    }
    return pts;
}

}  // namespace

std::vector<Streamline> trace_streamlines(const std::function<Vec3(const Vec3&)>& field,
                                          const StreamlineSpec& spec, const Box& box,
                                          int dimension) {
    if (spec.step_size <= 0.0) throw ConfigError("streamline step size must be positive");
    std::vector<Streamline> lines;
    lines.reserve(spec.seed_points.size());
    for (const Vec3& seed : spec.seed_points) {
        Streamline line;
        if (!box.contains(seed, dimension)) {
            line.seed_outside = true;
            lines.push_back(std::move(line));
            continue;
        }
        if (spec.direction == TraceDirection::Forward) {
            line.points = trace_one(field, seed, spec.step_size, spec.max_steps, box, dimension);
        } else if (spec.direction == TraceDirection::Backward) {
            line.points = trace_one(field, seed, -spec.step_size, spec.max_steps, box, dimension);
        } else {
            std::vector<Vec3> back =
                trace_one(field, seed, -spec.step_size, spec.max_steps, box, dimension);
            line.points.assign(back.rbegin(), back.rend());  // ends at the seed
            std::vector<Vec3> fwd =
                trace_one(field, seed, spec.step_size, spec.max_steps, box, dimension);
            line.points.insert(line.points.end(), fwd.begin() + 1, fwd.end());
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

void write_streamlines_csv(std::ostream& out, const std::vector<Streamline>& lines,
                           int dimension) {
    out << (dimension == 3 ? "line,vertex,x,y,z" : "line,vertex,x,y") << '\n';
    out.precision(17);
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = 0; j < lines[i].points.size(); ++j) {
            const Vec3& p = lines[i].points[j];
            out << i << ',' << j << ',' << p.x() << ',' << p.y();
            if (dimension == 3) out << ',' << p.z();
            out << '\n';
        }
}

}  // namespace meshfield

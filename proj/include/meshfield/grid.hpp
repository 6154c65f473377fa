#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "meshfield/model.hpp"
#include "meshfield/types.hpp"

namespace meshfield {

/// Regular evaluation grid over an axis-aligned box. For 2D grids the z
/// resolution is 1 and the z coordinate is box.lo.z.
struct GridSpec {
    Box box;
    std::array<int, 3> resolution{2, 2, 1};
    int dimension = 2;

    /// Throws ConfigError unless every active axis has resolution >= 2.
    void validate() const;
    std::size_t node_count() const;
    Vec3 node(int ix, int iy, int iz) const;
    Vec3 spacing() const;
};

/// Grid samples of a potential and its gradient field, x-fastest order.
struct GridField {
    GridSpec spec;
    std::vector<Vec3> points;
    std::vector<double> scalars;
    std::vector<Vec3> vectors;
};

GridField eval_grid(const ScalarPotentialModel& model, const GridSpec& spec);
GridField eval_grid(const std::function<Vec3(const Vec3&)>& field, const GridSpec& spec);

/// Model-versus-grid storage accounting: a model stores k (d+1)-tuples
/// (centre + coefficient), the grid stores d values per node.
struct FootprintReport {
    std::size_t model_numbers = 0;
    std::size_t grid_numbers = 0;
    double compression_ratio = 0.0;    // model_numbers / grid_numbers
    double centre_point_ratio = 0.0;   // centres / grid nodes
};

FootprintReport footprint(std::size_t centre_count, int dimension, const GridSpec& spec);

void write_grid_csv(std::ostream& out, const GridField& grid);
/// Legacy ASCII structured-points output (9 significant digits).
void write_grid_vtk(std::ostream& out, const GridField& grid, const std::string& title);
void write_grid_vtk_file(const std::string& path, const GridField& grid,
                         const std::string& title);

enum class TraceDirection { Forward, Backward, Both };

struct StreamlineSpec {
    std::vector<Vec3> seed_points;
    double step_size = 1e-2;
    int max_steps = 1000;
    TraceDirection direction = TraceDirection::Forward;
};

struct Streamline {
    std::vector<Vec3> points;
    bool seed_outside = false;
};

/// Fixed-step 4th-order Runge-Kutta tracing of the field from each seed.
/// A trace stops on leaving `box`, after max_steps, or where |field| drops
/// below 1e-12. `Both` joins the reversed backward trace with the forward
/// one. Seeds outside the box yield empty polylines flagged seed_outside.
std::vector<Streamline> trace_streamlines(const std::function<Vec3(const Vec3&)>& field,
                                          const StreamlineSpec& spec, const Box& box,
                                          int dimension);

/// CSV rows: streamline index, vertex index, coordinates.
void write_streamlines_csv(std::ostream& out, const std::vector<Streamline>& lines,
                           int dimension);

}  // namespace meshfield

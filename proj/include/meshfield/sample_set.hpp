#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "meshfield/types.hpp"

namespace meshfield {

/// Scattered sample points with optional scalar constraints (potential
/// values) and/or vector constraints. Scalar and vector constraint sets may
/// overlap (a point may carry both).
struct SampleSet {
    int dimension = 2;
    std::vector<Vec3> points;
    std::vector<std::pair<int, double>> scalar_values;
    std::vector<std::pair<int, Vec3>> vector_values;

    std::size_t size() const { return points.size(); }
    Box bounding_box() const;

    /// Checks constraint indices and rejects near-coincident points
    /// (distance < tol). Throws InputError listing the offending indices.
    void validate(double coincidence_tol = 1e-12) const;

    /// Drops coincident points, keeping the first occurrence of each
    /// location and remapping constraint indices. Returns the number of
    /// points removed.
    int deduplicate(double coincidence_tol = 1e-12);

    /// Points carrying at least one constraint, each counted once, in
    /// first-constraint order. These are the default RBF centres.
    std::vector<Vec3> constrained_points() const;
};

/// CSV with header x,y[,z],f,vx,vy[,vz]; blank cells mark absent constraints.
SampleSet read_samples_csv(std::istream& in);
SampleSet read_samples_csv_file(const std::string& path);
void write_samples_csv(std::ostream& out, const SampleSet& samples);
void write_samples_csv_file(const std::string& path, const SampleSet& samples);

}  // namespace meshfield

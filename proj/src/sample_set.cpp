#include "meshfield/sample_set.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace meshfield {

Box SampleSet::bounding_box() const {
    Box box;
    if (points.empty()) return box;
    box.lo = box.hi = points.front();
    for (const Vec3& p : points) {
        box.lo = box.lo.cwiseMin(p);
        box.hi = box.hi.cwiseMax(p);
    }
    return box;
}

namespace {

// Pairs of points closer than tol, found on a coordinate-sorted sweep.
std::vector<std::pair<int, int>> coincident_pairs(const std::vector<Vec3>& pts, double tol) {
    std::vector<int> order(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return pts[a].x() < pts[b].x(); });
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            if (pts[order[j]].x() - pts[order[i]].x() > tol) break;
            if ((pts[order[j]] - pts[order[i]]).norm() < tol)
                pairs.emplace_back(std::min(order[i], order[j]), std::max(order[i], order[j]));
        }
    }
    return pairs;
}

}  // namespace

void SampleSet::validate(double coincidence_tol) const {
    if (dimension != 2 && dimension != 3) throw InputError("dimension must be 2 or 3");
    const int n = static_cast<int>(points.size());
    for (const auto& [idx, f] : scalar_values) {
        (void)f;
        if (idx < 0 || idx >= n)
            throw InputError("scalar constraint references missing point " + std::to_string(idx));
    }
    for (const auto& [idx, v] : vector_values) {
        (void)v;
        if (idx < 0 || idx >= n)
            throw InputError("vector constraint references missing point " + std::to_string(idx));
    }
    auto pairs = coincident_pairs(points, coincidence_tol);
    if (!pairs.empty()) {
        std::ostringstream os;
        os << "coincident points (tol " << coincidence_tol << "):";
        for (std::size_t i = 0; i < pairs.size() && i < 16; ++i)
            os << " (" << pairs[i].first << "," << pairs[i].second << ")";
        if (pairs.size() > 16) os << " ...";
        throw InputError(os.str());
    }
}

int SampleSet::deduplicate(double coincidence_tol) {
    auto pairs = coincident_pairs(points, coincidence_tol);
    if (pairs.empty()) return 0;
    std::unordered_set<int> drop;
    for (auto& [keep, dup] : pairs) {
        (void)keep;
        drop.insert(dup);
    }
    std::vector<int> remap(points.size(), -1);
    std::vector<Vec3> kept;
    kept.reserve(points.size() - drop.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (drop.count(static_cast<int>(i))) continue;
        remap[i] = static_cast<int>(kept.size());
        kept.push_back(points[i]);
    }
    // Constraints on dropped points follow the surviving twin.
    for (auto& [keep, dup] : pairs)
        if (remap[dup] < 0) remap[dup] = remap[keep];
    points = std::move(kept);
    for (auto& [idx, f] : scalar_values) idx = remap[idx];
    for (auto& [idx, v] : vector_values) idx = remap[idx];
    return static_cast<int>(drop.size());
}

std::vector<Vec3> SampleSet::constrained_points() const {
    std::vector<char> seen(points.size(), 0);
    std::vector<Vec3> out;
    auto add = [&](int idx) {
        if (!seen[idx]) {
            seen[idx] = 1;
            out.push_back(points[idx]);
        }
    };
    for (const auto& [idx, f] : scalar_values) add(idx);
    for (const auto& [idx, v] : vector_values) add(idx);
    return out;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

bool blank(const std::string& s) {
    return s.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

SampleSet read_samples_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty sample file");
    auto header = split_csv(line);
    for (auto& h : header) {
        h.erase(std::remove_if(h.begin(), h.end(), [](char c) { return std::isspace((unsigned char)c); }),
                h.end());
    }
    int col_x = -1, col_y = -1, col_z = -1, col_f = -1, col_vx = -1, col_vy = -1, col_vz = -1;
    for (int i = 0; i < static_cast<int>(header.size()); ++i) {
        const std::string& h = header[i];
        if (h == "x") col_x = i;
        else if (h == "y") col_y = i;
        else if (h == "z") col_z = i;
        else if (h == "f" || h == "fx") col_f = i;
        else if (h == "vx") col_vx = i;
        else if (h == "vy") col_vy = i;
        else if (h == "vz") col_vz = i;
        else throw InputError("unknown column '" + h + "' in sample CSV header");
    }
    if (col_x < 0 || col_y < 0) throw InputError("sample CSV needs x and y columns");

    SampleSet s;
    s.dimension = col_z >= 0 ? 3 : 2;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) continue;
        auto cells = split_csv(line);
        auto get = [&](int col) -> double {
            if (col >= static_cast<int>(cells.size()) || blank(cells[col]))
                throw InputError("line " + std::to_string(lineno) + ": missing coordinate");
            try {
                std::size_t pos = 0;
                double v = std::stod(cells[col], &pos);
                return v;
            } catch (const std::exception&) {
                throw InputError("line " + std::to_string(lineno) + ": bad number '" +
                                 cells[col] + "'");
            }
        };
        auto has = [&](int col) {
            return col >= 0 && col < static_cast<int>(cells.size()) && !blank(cells[col]);
        };
        Vec3 p(get(col_x), get(col_y), col_z >= 0 ? get(col_z) : 0.0);
        int idx = static_cast<int>(s.points.size());
        s.points.push_back(p);
        if (has(col_f)) s.scalar_values.emplace_back(idx, get(col_f));
        if (has(col_vx) || has(col_vy) || has(col_vz)) {
            Vec3 v(has(col_vx) ? get(col_vx) : 0.0, has(col_vy) ? get(col_vy) : 0.0,
                   has(col_vz) ? get(col_vz) : 0.0);
            s.vector_values.emplace_back(idx, v);
        }
    }
    return s;
}

SampleSet read_samples_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open sample file: " + path);
    return read_samples_csv(in);
}

void write_samples_csv(std::ostream& out, const SampleSet& s) {
    const int d = s.dimension;
    out << (d == 3 ? "x,y,z,f,vx,vy,vz\n" : "x,y,f,vx,vy\n");
    std::vector<const double*> f(s.points.size(), nullptr);
    std::vector<const Vec3*> v(s.points.size(), nullptr);
    for (const auto& [idx, val] : s.scalar_values) f[idx] = &val;
    for (const auto& [idx, vec] : s.vector_values) v[idx] = &vec;
    out << std::setprecision(17);
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        out << s.points[i].x() << ',' << s.points[i].y();
        if (d == 3) out << ',' << s.points[i].z();
        out << ',';
        if (f[i]) out << *f[i];
        out << ',';
        if (v[i]) out << v[i]->x();
        out << ',';
        if (v[i]) out << v[i]->y();
        if (d == 3) {
            out << ',';
            if (v[i]) out << v[i]->z();
        }
        out << '\n';
    }
}

void write_samples_csv_file(const std::string& path, const SampleSet& samples) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write sample file: " + path);
    write_samples_csv(out, samples);
}

}  // namespace meshfield

#pragma once

#include <array>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "miabplan/rng.hpp"

namespace miab {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    bool operator==(const Point3&) const = default;
};

inline Point3 operator-(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Point3 operator+(const Point3& a, const Point3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Point3 operator*(double s, const Point3& p) { return {s * p.x, s * p.y, s * p.z}; }
inline double dot(const Point3& a, const Point3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Point3 cross(const Point3& a, const Point3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Point3& p) { return std::sqrt(dot(p, p)); }

double dist3d(const Point3& p, const Point3& q);
double dist2d(const Point3& p, const Point3& q);

// 2D breakpoint distance of the two-branch UMi LoS path-loss model,
// 4 (hBS - hE)(hUT - hE) f / c with f in GHz and c = 3e8 m/s.
// Throws std::domain_error when an antenna does not clear the effective
// environment height hE.
double breakpoint_distance(double h_bs_m, double h_ut_m, double h_e_m, double f_ghz);

struct Segment {
    Point3 p;
    Point3 q;
};

// Eight-vertex, six-face obstacle volume. Vertices 0-3 form the bottom
// ring, 4-7 the top ring with vertex 4 above vertex 0. Faces follow the
// fixed convention bottom, top, then the four sides. Faces may deviate
// from planarity by at most 1e-6 of their diagonal; the solid must be
// convex with positive volume (boxes and frusta qualify).
class Cuboid {
  public:
    static constexpr std::array<std::array<int, 4>, 6> kFaces = {{
        {0, 1, 2, 3},
        {4, 5, 6, 7},
        {0, 1, 5, 4},
        {1, 2, 6, 5},
        {2, 3, 7, 6},
        {3, 0, 4, 7},
    }};

    explicit Cuboid(const std::array<Point3, 8>& vertices);

    static Cuboid axis_aligned(const Point3& lo, const Point3& hi);

    const std::array<Point3, 8>& vertices() const { return verts_; }
    double volume() const { return volume_; }

    // Half-space containment; margin > 0 demands strict interior clearance.
    bool contains(const Point3& p, double margin = 0.0) const;

  private:
    struct Plane {
        Point3 n;   // unit outward normal
        double d;   // plane offset: dot(n, x) = d
    };

    std::array<Point3, 8> verts_{};
    std::array<Plane, 6> planes_{};
    double volume_ = 0.0;
};

// True when the segment crosses the obstacle volume: it either pierces a
// face (each quadrilateral tested as two triangles) or runs through the
// interior. Intersections with segment parameter t within 1e-9 of an
// endpoint are ignored so a radio mounted flush against an obstacle does
// not shadow itself.
bool segment_blocked_by(const Segment& seg, const Cuboid& obs);

enum class LosClass { los, nlos };

LosClass los_class(const Segment& seg, std::span<const Cuboid> obstacles);

// Closed convex 2D region given as an intersection of half-planes
// a*x + b*y <= c. Construction enumerates the boundary-line intersection
// vertices, rejects empty or unbounded regions, and caches the bounding
// box used for sampling and mutation scaling.
class AreaPolygon {
  public:
    struct HalfPlane {
        double a;
        double b;
        double c;
    };

    explicit AreaPolygon(std::vector<HalfPlane> half_planes);

    static AreaPolygon rectangle(double xmin, double ymin, double xmax, double ymax);

    const std::vector<HalfPlane>& half_planes() const { return hp_; }
    const std::vector<std::pair<double, double>>& vertices() const { return verts_; }

    // All inequalities hold within 1e-9 absolute.
    bool contains(double x, double y) const;

    // Uniform rejection sample from the bounding box; throws after 1e6
    // rejections (degenerate region).
    std::pair<double, double> sample(Rng& rng) const;

    // Euclidean-nearest feasible point: the input when inside, otherwise
    // the best of the per-line orthogonal projections and the region
    // vertices. Exact for convex regions.
    std::pair<double, double> project(double x, double y) const;

    // Distance to the region (0 when inside).
    double distance_to(double x, double y) const;

    std::array<double, 4> bounding_box() const { return {xmin_, ymin_, xmax_, ymax_}; }
    double bbox_diagonal() const { return std::hypot(xmax_ - xmin_, ymax_ - ymin_); }

  private:
    std::vector<HalfPlane> hp_;
    std::vector<std::pair<double, double>> verts_;
    double xmin_ = 0.0, ymin_ = 0.0, xmax_ = 0.0, ymax_ = 0.0;
};

}  // namespace miab

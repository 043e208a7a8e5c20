#include "miabplan/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace miab {

namespace {

constexpr double kEndpointTol = 1e-9;   // segment-parameter band excluded at each endpoint
constexpr double kContainsTol = 1e-9;   // absolute tolerance for half-plane membership
constexpr double kBaryTol = 1e-9;       // inclusive slack on barycentric face bounds

// Newell's method; robust plane normal for a near-planar quad.
Point3 newell_normal(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
    Point3 n{0, 0, 0};
    const std::array<const Point3*, 4> v{&a, &b, &c, &d};
    for (int i = 0; i < 4; ++i) {
        const Point3& p = *v[i];
        const Point3& q = *v[(i + 1) % 4];
        n.x += (p.y - q.y) * (p.z + q.z);
        n.y += (p.z - q.z) * (p.x + q.x);
        n.z += (p.x - q.x) * (p.y + q.y);
    }
    return n;
}

// Moller-Trumbore segment/triangle test restricted to t in
// [kEndpointTol, 1 - kEndpointTol]. The quad's outer edges are tested
// exclusively so a ray grazing an obstacle edge stays LoS, while the
// diagonal shared by the face's two triangles is inclusive so interior
// crossings near it are never dropped. Transversal crossings exactly
// through an outer edge are caught by the interior probe in
// segment_blocked_by.
bool segment_hits_triangle(const Point3& p, const Point3& dir, const Point3& a, const Point3& b,
                           const Point3& c, bool diagonal_is_ab) {
    const Point3 e1 = b - a;
    const Point3 e2 = c - a;
    const Point3 pv = cross(dir, e2);
    const double det = dot(e1, pv);
    const double scale = norm(e1) * norm(e2) * norm(dir);
    if (std::abs(det) <= 1e-14 * std::max(1.0, scale)) {
        return false;  // parallel or degenerate; grazing along the plane does not block
    }
    const double inv = 1.0 / det;
    const Point3 tv = p - a;
    const double u = dot(tv, pv) * inv;       // u = 0 on edge a-c
    const Point3 qv = cross(tv, e1);
    const double v = dot(dir, qv) * inv;      // v = 0 on edge a-b
    const double u_min = diagonal_is_ab ? kBaryTol : -kBaryTol;
    const double v_min = diagonal_is_ab ? -kBaryTol : kBaryTol;
    if (u < u_min || v < v_min || u + v > 1.0 - kBaryTol) {
        return false;
    }
    const double t = dot(e2, qv) * inv;
    return t > kEndpointTol && t < 1.0 - kEndpointTol;
}

}  // namespace

double dist3d(const Point3& p, const Point3& q) {
    return std::sqrt((p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y) +
                     (p.z - q.z) * (p.z - q.z));
}

double dist2d(const Point3& p, const Point3& q) {
    return std::hypot(p.x - q.x, p.y - q.y);
}

double breakpoint_distance(double h_bs_m, double h_ut_m, double h_e_m, double f_ghz) {
    if (!(h_bs_m > h_e_m) || !(h_ut_m > h_e_m)) {
        throw std::domain_error("breakpoint_distance: antenna height must exceed hE");
    }
    if (!(f_ghz > 0.0)) {
        throw std::domain_error("breakpoint_distance: carrier frequency must be positive");
    }
    constexpr double kSpeedOfLight = 3.0e8;
    return 4.0 * (h_bs_m - h_e_m) * (h_ut_m - h_e_m) * f_ghz * 1e9 / kSpeedOfLight;
}

Cuboid::Cuboid(const std::array<Point3, 8>& vertices) : verts_(vertices) {
    Point3 centroid{0, 0, 0};
    for (const Point3& v : verts_) {
        centroid = centroid + (1.0 / 8.0) * v;
    }

    for (std::size_t f = 0; f < kFaces.size(); ++f) {
        const auto& idx = kFaces[f];
        const Point3& a = verts_[idx[0]];
        const Point3& b = verts_[idx[1]];
        const Point3& c = verts_[idx[2]];
        const Point3& d = verts_[idx[3]];

        Point3 n = newell_normal(a, b, c, d);
        const double len = norm(n);
        if (len <= 0.0 || !std::isfinite(len)) {
            throw std::invalid_argument("Cuboid: degenerate face " + std::to_string(f));
        }
        n = (1.0 / len) * n;

        Point3 face_center = 0.25 * (a + b + c + d);
        if (dot(n, face_center - centroid) < 0.0) {
            n = -1.0 * n;
        }

        const double offset = dot(n, face_center);
        const double diag = std::max(dist3d(a, c), dist3d(b, d));
        for (int k : idx) {
            if (std::abs(dot(n, verts_[k]) - offset) > 1e-6 * std::max(diag, 1e-12)) {
                throw std::invalid_argument("Cuboid: face " + std::to_string(f) +
                                            " deviates from planarity beyond tolerance");
            }
        }
        planes_[f] = Plane{n, offset};
    }

    // Signed volume by the divergence theorem over outward-oriented face
    // triangles; orientation is fixed against each face's outward normal.
    double vol = 0.0;
    for (std::size_t f = 0; f < kFaces.size(); ++f) {
        const auto& idx = kFaces[f];
        const std::array<std::array<int, 3>, 2> tris{{{idx[0], idx[1], idx[2]}, {idx[0], idx[2], idx[3]}}};
        for (const auto& tri : tris) {
            const Point3& a = verts_[tri[0]];
            const Point3& b = verts_[tri[1]];
            const Point3& c = verts_[tri[2]];
            Point3 tn = cross(b - a, c - a);
            const double sign = dot(tn, planes_[f].n) >= 0.0 ? 1.0 : -1.0;
            vol += sign * dot(a, cross(b, c)) / 6.0;
        }
    }
    volume_ = vol;
    if (!(volume_ > 0.0)) {
        throw std::invalid_argument("Cuboid: volume must be positive");
    }
}

Cuboid Cuboid::axis_aligned(const Point3& lo, const Point3& hi) {
    return Cuboid({{{lo.x, lo.y, lo.z},
                    {hi.x, lo.y, lo.z},
                    {hi.x, hi.y, lo.z},
                    {lo.x, hi.y, lo.z},
                    {lo.x, lo.y, hi.z},
                    {hi.x, lo.y, hi.z},
                    {hi.x, hi.y, hi.z},
                    {lo.x, hi.y, hi.z}}});
}

bool Cuboid::contains(const Point3& p, double margin) const {
    for (const Plane& pl : planes_) {
        if (dot(pl.n, p) - pl.d > -margin) {
            return false;
        }
    }
    return true;
}

bool segment_blocked_by(const Segment& seg, const Cuboid& obs) {
    const Point3 dir = seg.q - seg.p;
    for (const auto& idx : Cuboid::kFaces) {
        const auto& v = obs.vertices();
        // Triangles (q0,q1,q2) and (q0,q2,q3) share the diagonal q0-q2,
        // which is edge a-c of the first and a-b of the second.
        if (segment_hits_triangle(seg.p, dir, v[idx[0]], v[idx[1]], v[idx[2]], false) ||
            segment_hits_triangle(seg.p, dir, v[idx[0]], v[idx[2]], v[idx[3]], true)) {
            return true;
        }
    }
    // No face crossing: for a convex solid the segment is then entirely
    // inside or entirely outside, so one interior probe decides.
    return obs.contains(0.5 * (seg.p + seg.q), kEndpointTol);
}

LosClass los_class(const Segment& seg, std::span<const Cuboid> obstacles) {
    for (const Cuboid& obs : obstacles) {
        if (segment_blocked_by(seg, obs)) {
            return LosClass::nlos;
        }
    }
    return LosClass::los;
}

AreaPolygon::AreaPolygon(std::vector<HalfPlane> half_planes) : hp_(std::move(half_planes)) {
    if (hp_.empty()) {
        throw std::invalid_argument("AreaPolygon: no half-planes (unbounded)");
    }
    for (const HalfPlane& h : hp_) {
        if (!std::isfinite(h.a) || !std::isfinite(h.b) || !std::isfinite(h.c) ||
            (h.a == 0.0 && h.b == 0.0)) {
            throw std::invalid_argument("AreaPolygon: invalid half-plane coefficients");
        }
    }

    // Boundary vertices: pairwise line intersections that satisfy every
    // constraint. A loosened membership tolerance absorbs the solve
    // round-off before the strict contains() takes over.
    const std::size_t n = hp_.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const HalfPlane& u = hp_[i];
            const HalfPlane& v = hp_[j];
            const double det = u.a * v.b - u.b * v.a;
            const double scale = std::max({std::abs(u.a), std::abs(u.b), std::abs(v.a), std::abs(v.b)});
            if (std::abs(det) <= 1e-12 * scale * scale) {
                continue;
            }
            const double x = (u.c * v.b - u.b * v.c) / det;
            const double y = (u.a * v.c - u.c * v.a) / det;
            bool feasible = true;
            for (const HalfPlane& w : hp_) {
                const double slack = std::max(1.0, std::abs(w.c)) * 1e-9;
                if (w.a * x + w.b * y - w.c > slack) {
                    feasible = false;
                    break;
                }
            }
            if (feasible) {
                verts_.emplace_back(x, y);
            }
        }
    }
    if (verts_.empty()) {
        throw std::invalid_argument("AreaPolygon: empty or degenerate feasible region");
    }

    // Recession-direction probe: the region is unbounded iff some direction
    // along a boundary line leaves every constraint non-increasing.
    for (const HalfPlane& h : hp_) {
        const double len = std::hypot(h.a, h.b);
        const std::array<std::pair<double, double>, 2> dirs{{{h.b / len, -h.a / len}, {-h.b / len, h.a / len}}};
        for (const auto& [dx, dy] : dirs) {
            bool escapes = true;
            for (const HalfPlane& w : hp_) {
                if (w.a * dx + w.b * dy > 1e-12 * std::hypot(w.a, w.b)) {
                    escapes = false;
                    break;
                }
            }
            if (escapes) {
                throw std::invalid_argument("AreaPolygon: region is unbounded");
            }
        }
    }

    xmin_ = ymin_ = std::numeric_limits<double>::infinity();
    xmax_ = ymax_ = -std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : verts_) {
        xmin_ = std::min(xmin_, x);
        xmax_ = std::max(xmax_, x);
        ymin_ = std::min(ymin_, y);
        ymax_ = std::max(ymax_, y);
    }
}

AreaPolygon AreaPolygon::rectangle(double xmin, double ymin, double xmax, double ymax) {
    return AreaPolygon({{1, 0, xmax}, {-1, 0, -xmin}, {0, 1, ymax}, {0, -1, -ymin}});
}

bool AreaPolygon::contains(double x, double y) const {
    for (const HalfPlane& h : hp_) {
        if (h.a * x + h.b * y - h.c > kContainsTol) {
            return false;
        }
    }
    return true;
}

std::pair<double, double> AreaPolygon::sample(Rng& rng) const {
    for (int attempt = 0; attempt < 1000000; ++attempt) {
        const double x = rng.uniform(xmin_, xmax_);
        const double y = rng.uniform(ymin_, ymax_);
        if (contains(x, y)) {
            return {x, y};
        }
    }
    throw std::runtime_error("AreaPolygon::sample: rejection budget exhausted (degenerate area)");
}

std::pair<double, double> AreaPolygon::project(double x, double y) const {
    if (contains(x, y)) {
        return {x, y};
    }
    double best_x = 0.0, best_y = 0.0;
    double best_d2 = std::numeric_limits<double>::infinity();
    auto consider = [&](double px, double py) {
        const double d2 = (px - x) * (px - x) + (py - y) * (py - y);
        if (d2 < best_d2) {
            best_d2 = d2;
            best_x = px;
            best_y = py;
        }
    };
    for (const HalfPlane& h : hp_) {
        const double n2 = h.a * h.a + h.b * h.b;
        const double viol = (h.a * x + h.b * y - h.c) / n2;
        const double px = x - viol * h.a;
        const double py = y - viol * h.b;
        if (contains(px, py)) {
            consider(px, py);
        }
    }
    for (const auto& [vx, vy] : verts_) {
        consider(vx, vy);
    }
    return {best_x, best_y};
}

double AreaPolygon::distance_to(double x, double y) const {
    if (contains(x, y)) {
        return 0.0;
    }
    const auto [px, py] = project(x, y);
    return std::hypot(px - x, py - y);
}

}  // namespace miab

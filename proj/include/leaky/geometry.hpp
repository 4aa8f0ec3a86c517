#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace leaky {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

enum class CurveKind { segment, circle, fourier_loop, polyline };

// One harmonic of x(t) = sum ax cos(nt) + bx sin(nt), y(t) likewise, t in [0, 2pi).
struct FourierHarmonic {
    int order = 1;
    double ax = 0.0;
    double bx = 0.0;
    double ay = 0.0;
    double by = 0.0;
};

class CurveShape;

// Unit-speed planar curve s in [0, length()].
class ArcCurve {
public:
    static ArcCurve segment(const Vec2& from, const Vec2& to);
    static ArcCurve circle(const Vec2& center, double radius, double start_angle = 0.0,
                           double sweep = 2.0 * 3.14159265358979323846);
    static ArcCurve polyline(std::vector<Vec2> vertices, bool closed = false);

    CurveKind kind() const { return kind_; }
    double length() const { return length_; }
    bool closed() const { return closed_; }

    Vec2 point(double s) const;
    Vec2 tangent(double s) const;
    double curvature(double s) const;

    // Open piece [from, to] of this curve (arc coordinates of this curve; wraps on closed curves).
    ArcCurve subcurve(double from, double to) const;

    // Arc positions of corners strictly inside the curve (polylines only).
    std::vector<double> corners() const;

    // Points at s = i * length / count, i = 0..count-1 (closed) or 0..count (open).
    std::vector<Vec2> sample(int count) const;

    // True if the sampled polyline self-intersects (closed curves also check the wrap).
    bool self_intersects(int samples = 1024) const;

private:
    friend ArcCurve make_fourier_loop(std::span<const FourierHarmonic>, double);
    ArcCurve(std::shared_ptr<const CurveShape> shape, CurveKind kind, double offset, double length,
             bool closed);
    double shape_coordinate(double s) const;

    std::shared_ptr<const CurveShape> shape_;
    CurveKind kind_ = CurveKind::segment;
    double offset_ = 0.0;
    double length_ = 0.0;
    bool closed_ = false;
};

// Closed curve from Fourier harmonics, reparametrized by arc length and scaled to total length.
ArcCurve make_fourier_loop(std::span<const FourierHarmonic> harmonics, double length);

struct GraphEdge {
    ArcCurve curve;
    // A truncated end stands for a semi-infinite continuation; it is not a free end of the graph.
    bool truncated_start = false;
    bool truncated_end = false;
};

// Where an edge endpoint touches other edge endpoints.
struct EdgeEnd {
    int edge = 0;
    bool at_end = false;  // false: s = 0, true: s = length
};

class LeakyGraph {
public:
    LeakyGraph() = default;
    explicit LeakyGraph(double alpha) : alpha_(alpha) {}

    // Polylines are split at their corners into straight edges.
    void add_edge(const ArcCurve& curve, bool truncated_start = false, bool truncated_end = false);

    double alpha() const { return alpha_; }
    void set_alpha(double alpha) { alpha_ = alpha; }
    const std::vector<GraphEdge>& edges() const { return edges_; }
    double total_length() const;
    bool has_leads() const;
    // Bottom of the essential spectrum: -alpha^2/4 with leads, 0 for compact graphs.
    double threshold() const;

    // Endpoints of other edges coinciding with the given edge end.
    std::vector<EdgeEnd> neighbours(const EdgeEnd& end) const;
    Vec2 end_point(const EdgeEnd& end) const;

    // Throws std::invalid_argument if alpha <= 0, no length, or edges fold back at a shared vertex.
    void validate() const;

private:
    std::vector<GraphEdge> edges_;
    double alpha_ = 1.0;
};

// Star of rays from the origin; ray 0 points along +x, ray i at the angle sum of beta[0..i-1].
struct StarConfig {
    std::vector<double> beta;
    double truncation = 0.0;  // 0 selects 12 / kappa_min with kappa_min = alpha / 2

    int rays() const { return int(beta.size()) + 1; }
    double ray_angle(int ray) const;
    void validate() const;
};

LeakyGraph make_star_graph(const StarConfig& config, double alpha);
double default_star_truncation(double alpha);

// Distance between arc position s on ray i and t on ray j (rays numbered from 0).
double star_distance(const StarConfig& config, int i, int j, double s, double t);

struct PointArray {
    int dimension = 2;
    std::vector<Vec3> points;  // z ignored in two dimensions
    std::vector<double> alphas;

    std::size_t size() const { return points.size(); }
    double distance(std::size_t a, std::size_t b) const;
    void validate() const;
};

// Mean over s of |gamma(s + u) - gamma(s)|^p, times the length (the chord integral).
double chord_mean(const ArcCurve& loop, double u, double p, int samples = 4096);
// Same from equally spaced samples of a closed loop (ArcCurve::sample), shift u = offset * length / samples.size().
double chord_mean(std::span<const Vec2> samples, double length, int offset, double p);
double circle_chord_bound(double length, double u, double p);

// Sum over j of |y_{j+k} - y_j|^p for points on a closed loop of the given length.
double polygon_chord_sum(std::span<const Vec2> points, double length, int k, double p);
double regular_polygon_chord_bound(int n, double length, int k, double p);

// Vertices of the regular n-gon with the given perimeter, circumcentre at the origin.
std::vector<Vec2> regular_polygon(int n, double perimeter);

// Points gamma(j L / n), j = 0..n-1.
std::vector<Vec2> loop_sites(const ArcCurve& loop, int n);

// Shoelace area of the sampled loop (absolute value).
double enclosed_area(const ArcCurve& loop, int samples = 4096);

}  // namespace leaky

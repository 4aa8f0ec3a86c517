#include "leaky/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace leaky {

class CurveShape {
public:
    virtual ~CurveShape() = default;
    virtual double length() const = 0;
    virtual bool periodic() const = 0;
    virtual Vec2 point(double u) const = 0;
    virtual Vec2 tangent(double u) const = 0;
    virtual double curvature(double u) const = 0;
    virtual std::vector<double> corners() const { return {}; }
};

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

class SegmentShape final : public CurveShape {
public:
    SegmentShape(const Vec2& from, const Vec2& to) : from_(from), direction_(to - from), length_(direction_.norm()) {
        direction_ /= length_;
    }
    double length() const override { return length_; }
    bool periodic() const override { return false; }
    Vec2 point(double u) const override { return from_ + u * direction_; }
    Vec2 tangent(double) const override { return direction_; }
    double curvature(double) const override { return 0.0; }

private:
    Vec2 from_;
    Vec2 direction_;
    double length_;
};

class CircleShape final : public CurveShape {
public:
    CircleShape(const Vec2& center, double radius, double start, double sweep)
        : center_(center), radius_(radius), start_(start), sweep_(sweep) {}
    double length() const override { return radius_ * sweep_; }
    bool periodic() const override { return sweep_ >= kTwoPi * (1.0 - 1e-15); }
    Vec2 point(double u) const override {
        const double angle = start_ + u / radius_;
        return center_ + radius_ * Vec2(std::cos(angle), std::sin(angle));
    }
    Vec2 tangent(double u) const override {
        const double angle = start_ + u / radius_;
        return {-std::sin(angle), std::cos(angle)};
    }
    double curvature(double) const override { return 1.0 / radius_; }

private:
    Vec2 center_;
    double radius_;
    double start_;
    double sweep_;
};

class PolylineShape final : public CurveShape {
public:
    PolylineShape(std::vector<Vec2> vertices, bool closed) : vertices_(std::move(vertices)), closed_(closed) {
        if (closed_) vertices_.push_back(vertices_.front());
        cumulative_.push_back(0.0);
        for (std::size_t i = 1; i < vertices_.size(); ++i) {
            const double step = (vertices_[i] - vertices_[i - 1]).norm();
            if (!(step > 0.0)) throw std::invalid_argument("polyline: repeated consecutive vertex");
            cumulative_.push_back(cumulative_.back() + step);
        }
    }
    double length() const override { return cumulative_.back(); }
    bool periodic() const override { return closed_; }
    Vec2 point(double u) const override {
        const std::size_t i = piece(u);
        const double t = (u - cumulative_[i]) / (cumulative_[i + 1] - cumulative_[i]);
        return (1.0 - t) * vertices_[i] + t * vertices_[i + 1];
    }
    Vec2 tangent(double u) const override {
        const std::size_t i = piece(u);
        return (vertices_[i + 1] - vertices_[i]).normalized();
    }
    double curvature(double) const override { return 0.0; }
    std::vector<double> corners() const override {
        std::vector<double> out;
        for (std::size_t i = 1; i + 1 < vertices_.size(); ++i) out.push_back(cumulative_[i]);
        if (closed_) out.push_back(0.0);
        return out;
    }

private:
    std::size_t piece(double u) const {
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        std::size_t i = (it == cumulative_.begin()) ? 0 : std::size_t(it - cumulative_.begin()) - 1;
        return std::min(i, cumulative_.size() - 2);
    }
    std::vector<Vec2> vertices_;
    std::vector<double> cumulative_;
    bool closed_;
};

class FourierShape final : public CurveShape {
public:
    FourierShape(std::vector<FourierHarmonic> harmonics, double length)
        : harmonics_(std::move(harmonics)), length_(length) {
        const int samples = 4096;
        std::vector<double> speed(samples);
        for (int i = 0; i < samples; ++i) speed[i] = raw_derivative(kTwoPi * i / samples).norm();
        double mean = 0.0;
        for (double v : speed) mean += v;
        mean /= samples;
        if (!(mean > 0.0)) throw std::invalid_argument("fourier loop: degenerate (zero length) curve");
        const double minimum = *std::min_element(speed.begin(), speed.end());
        if (minimum < 1e-6 * mean) throw std::invalid_argument("fourier loop: curve has a cusp (vanishing speed)");
        mean_speed_ = mean;
        // Fourier series of the speed; the cumulative length is its exact antiderivative.
        int last = 0;
        for (int k = 1; k < samples / 2; ++k) {
            double a = 0.0;
            double b = 0.0;
            for (int i = 0; i < samples; ++i) {
                const double angle = kTwoPi * double((long long)k * i % samples) / samples;
                a += speed[i] * std::cos(angle);
                b += speed[i] * std::sin(angle);
            }
            a *= 2.0 / samples;
            b *= 2.0 / samples;
            speed_cos_.push_back(a);
            speed_sin_.push_back(b);
            if (std::fabs(a) + std::fabs(b) > 1e-15 * mean) last = k;
            if (k > last + 64) break;
        }
        if (last >= samples / 2 - 8) throw std::invalid_argument("fourier loop: speed not resolved (curve too rough)");
        speed_cos_.resize(last);
        speed_sin_.resize(last);
        scale_ = length_ / (kTwoPi * mean_speed_);
    }
    double length() const override { return length_; }
    bool periodic() const override { return true; }
    Vec2 point(double u) const override { return scale_ * raw_point(parameter(u)); }
    Vec2 tangent(double u) const override { return raw_derivative(parameter(u)).normalized(); }
    double curvature(double u) const override {
        const double t = parameter(u);
        const Vec2 d1 = raw_derivative(t);
        const Vec2 d2 = raw_second(t);
        return (d1.x() * d2.y() - d1.y() * d2.x()) / std::pow(d1.norm(), 3) / scale_;
    }

private:
    Vec2 raw_point(double t) const {
        Vec2 p(0.0, 0.0);
        for (const auto& h : harmonics_) {
            const double c = std::cos(h.order * t);
            const double s = std::sin(h.order * t);
            p += Vec2(h.ax * c + h.bx * s, h.ay * c + h.by * s);
        }
        return p;
    }
    Vec2 raw_derivative(double t) const {
        Vec2 p(0.0, 0.0);
        for (const auto& h : harmonics_) {
            const double c = std::cos(h.order * t);
            const double s = std::sin(h.order * t);
            p += h.order * Vec2(-h.ax * s + h.bx * c, -h.ay * s + h.by * c);
        }
        return p;
    }
    Vec2 raw_second(double t) const {
        Vec2 p(0.0, 0.0);
        for (const auto& h : harmonics_) {
            const double c = std::cos(h.order * t);
            const double s = std::sin(h.order * t);
            p -= double(h.order) * h.order * Vec2(h.ax * c + h.bx * s, h.ay * c + h.by * s);
        }
        return p;
    }
    double series_speed(double t) const {
        double v = mean_speed_;
        for (std::size_t k = 0; k < speed_cos_.size(); ++k) {
            v += speed_cos_[k] * std::cos((k + 1) * t) + speed_sin_[k] * std::sin((k + 1) * t);
        }
        return v;
    }
    double cumulative(double t) const {
        double v = mean_speed_ * t;
        for (std::size_t k = 0; k < speed_cos_.size(); ++k) {
            const double n = double(k + 1);
            v += (speed_cos_[k] * std::sin(n * t) - speed_sin_[k] * (std::cos(n * t) - 1.0)) / n;
        }
        return v;
    }
    double parameter(double u) const {
        const double target = u / scale_;
        double lo = 0.0;
        double hi = kTwoPi;
        double t = target / mean_speed_;
        for (int iter = 0; iter < 100; ++iter) {
            const double residual = cumulative(t) - target;
            if (residual > 0.0) hi = std::min(hi, t); else lo = std::max(lo, t);
            double next = t - residual / series_speed(t);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::fabs(next - t) < 1e-15 * (1.0 + std::fabs(t))) return next;
            t = next;
        }
        return t;
    }

    std::vector<FourierHarmonic> harmonics_;
    double length_;
    double mean_speed_ = 0.0;
    double scale_ = 1.0;
    std::vector<double> speed_cos_;
    std::vector<double> speed_sin_;
};

bool segments_close(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, double tol) {
    auto cross = [](const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); };
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0) return true;
    auto point_segment = [](const Vec2& p, const Vec2& s0, const Vec2& s1) {
        const Vec2 e = s1 - s0;
        const double t = std::clamp((p - s0).dot(e) / e.squaredNorm(), 0.0, 1.0);
        return (p - (s0 + t * e)).norm();
    };
    const double distance = std::min({point_segment(a, c, d), point_segment(b, c, d), point_segment(c, a, b),
                                      point_segment(d, a, b)});
    return distance < tol;
}

}  // namespace

ArcCurve::ArcCurve(std::shared_ptr<const CurveShape> shape, CurveKind kind, double offset, double length,
                   bool closed)
    : shape_(std::move(shape)), kind_(kind), offset_(offset), length_(length), closed_(closed) {}

ArcCurve ArcCurve::segment(const Vec2& from, const Vec2& to) {
    if (!((to - from).norm() > 0.0)) throw std::invalid_argument("segment: endpoints coincide");
    auto shape = std::make_shared<SegmentShape>(from, to);
    return ArcCurve(shape, CurveKind::segment, 0.0, shape->length(), false);
}

ArcCurve ArcCurve::circle(const Vec2& center, double radius, double start_angle, double sweep) {
    if (!(radius > 0.0)) throw std::invalid_argument("circle: radius must be positive");
    if (!(sweep > 0.0) || sweep > kTwoPi * (1.0 + 1e-15)) throw std::invalid_argument("circle: sweep must lie in (0, 2pi]");
    auto shape = std::make_shared<CircleShape>(center, radius, start_angle, std::min(sweep, kTwoPi));
    return ArcCurve(shape, CurveKind::circle, 0.0, shape->length(), shape->periodic());
}

ArcCurve ArcCurve::polyline(std::vector<Vec2> vertices, bool closed) {
    if (vertices.size() < (closed ? 3u : 2u)) throw std::invalid_argument("polyline: too few vertices");
    auto shape = std::make_shared<PolylineShape>(std::move(vertices), closed);
    ArcCurve curve(shape, CurveKind::polyline, 0.0, shape->length(), closed);
    if (closed && curve.self_intersects(0)) throw std::invalid_argument("polyline: self-intersection detected");
    return curve;
}

ArcCurve make_fourier_loop(std::span<const FourierHarmonic> harmonics, double length) {
    if (harmonics.empty()) throw std::invalid_argument("fourier loop: no harmonics");
    if (!(length > 0.0)) throw std::invalid_argument("fourier loop: length must be positive");
    for (const auto& h : harmonics) {
        if (h.order < 1) throw std::invalid_argument("fourier loop: harmonic order must be >= 1");
    }
    auto shape = std::make_shared<FourierShape>(std::vector<FourierHarmonic>(harmonics.begin(), harmonics.end()), length);
    ArcCurve curve(shape, CurveKind::fourier_loop, 0.0, length, true);
    if (curve.self_intersects(1024)) throw std::invalid_argument("fourier loop: self-intersection detected");
    return curve;
}

double ArcCurve::shape_coordinate(double s) const {
    double u = offset_ + s;
    if (shape_->periodic()) {
        const double total = shape_->length();
        u = std::fmod(u, total);
        if (u < 0.0) u += total;
    }
    return u;
}

Vec2 ArcCurve::point(double s) const { return shape_->point(shape_coordinate(s)); }
Vec2 ArcCurve::tangent(double s) const { return shape_->tangent(shape_coordinate(s)); }
double ArcCurve::curvature(double s) const { return shape_->curvature(shape_coordinate(s)); }

ArcCurve ArcCurve::subcurve(double from, double to) const {
    if (!(to > from)) throw std::invalid_argument("subcurve: empty range");
    if (!closed_ && (from < -1e-12 * length_ || to > length_ * (1.0 + 1e-12))) {
        throw std::invalid_argument("subcurve: range outside the curve");
    }
    if (closed_ && to - from > length_ * (1.0 + 1e-12)) throw std::invalid_argument("subcurve: range longer than loop");
    return ArcCurve(shape_, kind_, offset_ + from, to - from, false);
}

std::vector<double> ArcCurve::corners() const {
    std::vector<double> out;
    const double total = shape_->length();
    for (double c : shape_->corners()) {
        double s = c - offset_;
        if (shape_->periodic()) {
            s = std::fmod(s, total);
            if (s < 0.0) s += total;
        }
        const double margin = 1e-12 * length_;
        if (s > margin && s < length_ - margin) out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Vec2> ArcCurve::sample(int count) const {
    if (count < 1) throw std::invalid_argument("sample: count must be positive");
    std::vector<Vec2> out;
    const int last = closed_ ? count - 1 : count;
    for (int i = 0; i <= last; ++i) out.push_back(point(length_ * i / count));
    return out;
}

bool ArcCurve::self_intersects(int samples) const {
    std::vector<Vec2> pts;
    if (kind_ == CurveKind::polyline || samples <= 0) {
        // exact vertices for polylines
        pts.push_back(point(0.0));
        for (double c : corners()) pts.push_back(point(c));
        if (!closed_) pts.push_back(point(length_));
    } else {
        pts = sample(samples);
    }
    if (closed_) pts.push_back(pts.front());
    const std::size_t segments = pts.size() - 1;
    const double tol = 1e-9 * length_;
    for (std::size_t i = 0; i < segments; ++i) {
        for (std::size_t j = i + 2; j < segments; ++j) {
            if (closed_ && i == 0 && j == segments - 1) continue;
            const Vec2 lo_i = pts[i].cwiseMin(pts[i + 1]);
            const Vec2 hi_i = pts[i].cwiseMax(pts[i + 1]);
            const Vec2 lo_j = pts[j].cwiseMin(pts[j + 1]);
            const Vec2 hi_j = pts[j].cwiseMax(pts[j + 1]);
            if ((lo_i.array() > hi_j.array() + tol).any() || (lo_j.array() > hi_i.array() + tol).any()) continue;
            if (segments_close(pts[i], pts[i + 1], pts[j], pts[j + 1], tol)) return true;
        }
    }
    return false;
}

void LeakyGraph::add_edge(const ArcCurve& curve, bool truncated_start, bool truncated_end) {
    if (curve.kind() != CurveKind::polyline) {
        edges_.push_back({curve, truncated_start, truncated_end});
        return;
    }
    std::vector<double> cuts{0.0};
    for (double c : curve.corners()) cuts.push_back(c);
    cuts.push_back(curve.length());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Vec2 a = curve.point(cuts[i]);
        const Vec2 b = curve.point(cuts[i + 1]);
        edges_.push_back({ArcCurve::segment(a, b), truncated_start && i == 0, truncated_end && i + 2 == cuts.size()});
    }
}

double LeakyGraph::total_length() const {
    double total = 0.0;
    for (const auto& e : edges_) total += e.curve.length();
    return total;
}

bool LeakyGraph::has_leads() const {
    return std::any_of(edges_.begin(), edges_.end(), [](const GraphEdge& e) { return e.truncated_start || e.truncated_end; });
}

double LeakyGraph::threshold() const { return has_leads() ? -0.25 * alpha_ * alpha_ : 0.0; }

Vec2 LeakyGraph::end_point(const EdgeEnd& end) const {
    const ArcCurve& c = edges_.at(end.edge).curve;
    return c.point(end.at_end ? c.length() : 0.0);
}

std::vector<EdgeEnd> LeakyGraph::neighbours(const EdgeEnd& end) const {
    std::vector<EdgeEnd> out;
    const ArcCurve& own = edges_.at(end.edge).curve;
    if (own.closed()) return out;
    const double tol = 1e-9 * std::max(1.0, total_length());
    const Vec2 p = end_point(end);
    for (int e = 0; e < int(edges_.size()); ++e) {
        if (edges_[e].curve.closed()) continue;
        for (bool at_end : {false, true}) {
            if (e == end.edge && at_end == end.at_end) continue;
            if ((end_point({e, at_end}) - p).norm() <= tol) out.push_back({e, at_end});
        }
    }
    return out;
}

void LeakyGraph::validate() const {
    if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) throw std::invalid_argument("graph: alpha must be positive");
    if (edges_.empty() || !(total_length() > 0.0)) throw std::invalid_argument("graph: total length must be positive");
    for (int e = 0; e < int(edges_.size()); ++e) {
        for (bool at_end : {false, true}) {
            const ArcCurve& c = edges_[e].curve;
            if (c.closed()) continue;
            const Vec2 out_dir = at_end ? Vec2(-c.tangent(c.length())) : c.tangent(0.0);
            for (const EdgeEnd& other : neighbours({e, at_end})) {
                const ArcCurve& d = edges_[other.edge].curve;
                const Vec2 other_dir = other.at_end ? Vec2(-d.tangent(d.length())) : d.tangent(0.0);
                const double angle = std::acos(std::clamp(out_dir.dot(other_dir), -1.0, 1.0));
                if (angle < 1e-6) throw std::invalid_argument("graph: edges meet at zero angle");
            }
        }
    }
}

double StarConfig::ray_angle(int ray) const {
    if (ray < 0 || ray >= rays()) throw std::out_of_range("star: ray index out of range");
    double angle = 0.0;
    for (int i = 0; i < ray; ++i) angle += beta[i];
    return angle;
}

void StarConfig::validate() const {
    if (beta.empty()) throw std::invalid_argument("star: at least two rays required");
    double sum = 0.0;
    for (double b : beta) {
        if (!(b > 0.0)) throw std::invalid_argument("star: angles must be positive");
        sum += b;
    }
    if (!(sum < kTwoPi)) throw std::invalid_argument("star: angles must sum to less than 2pi");
    if (truncation < 0.0) throw std::invalid_argument("star: truncation must be non-negative");
}

double default_star_truncation(double alpha) { return 12.0 / (0.5 * alpha); }

LeakyGraph make_star_graph(const StarConfig& config, double alpha) {
    config.validate();
    if (!(alpha > 0.0)) throw std::invalid_argument("star: alpha must be positive");
    const double length = config.truncation > 0.0 ? config.truncation : default_star_truncation(alpha);
    LeakyGraph graph(alpha);
    for (int i = 0; i < config.rays(); ++i) {
        const double angle = config.ray_angle(i);
        graph.add_edge(ArcCurve::segment(Vec2(0.0, 0.0), length * Vec2(std::cos(angle), std::sin(angle))), false, true);
    }
    return graph;
}

double star_distance(const StarConfig& config, int i, int j, double s, double t) {
    if (i < 0 || j < 0 || i >= config.rays() || j >= config.rays()) throw std::out_of_range("star_distance: ray index");
    if (s < 0.0 || t < 0.0) throw std::invalid_argument("star_distance: arc positions must be non-negative");
    if (i == j) return std::fabs(s - t);
    const double angle = std::fabs(config.ray_angle(j) - config.ray_angle(i));
    return std::sqrt(std::max(0.0, s * s + t * t - 2.0 * s * t * std::cos(angle)));
}

double PointArray::distance(std::size_t a, std::size_t b) const {
    if (dimension == 2) return (points[a].head<2>() - points[b].head<2>()).norm();
    return (points[a] - points[b]).norm();
}

void PointArray::validate() const {
    if (dimension != 2 && dimension != 3) throw std::invalid_argument("point array: dimension must be 2 or 3");
    if (points.empty()) throw std::invalid_argument("point array: no points");
    if (alphas.size() != points.size()) throw std::invalid_argument("point array: one coupling per point required");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!points[i].allFinite() || !std::isfinite(alphas[i])) throw std::invalid_argument("point array: non-finite value");
        for (std::size_t j = 0; j < i; ++j) {
            if (!(distance(i, j) > 0.0)) throw std::invalid_argument("point array: coincident points");
        }
    }
}

double chord_mean(const ArcCurve& loop, double u, double p, int samples) {
    if (!loop.closed()) throw std::invalid_argument("chord_mean: loop must be closed");
    if (!(u > 0.0 && u < loop.length())) throw std::invalid_argument("chord_mean: shift outside (0, L)");
    if (!(p > 0.0 && p <= 2.0)) throw std::invalid_argument("chord_mean: exponent outside (0, 2]");
    const double h = loop.length() / samples;
    double sum = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double s = i * h;
        sum += std::pow((loop.point(s + u) - loop.point(s)).norm(), p);
    }
    return sum * h;
}

double chord_mean(std::span<const Vec2> samples, double length, int offset, double p) {
    const int n = int(samples.size());
    if (n < 2) throw std::invalid_argument("chord_mean: too few samples");
    if (offset <= 0 || offset >= n) throw std::invalid_argument("chord_mean: shift outside (0, L)");
    if (!(p > 0.0 && p <= 2.0)) throw std::invalid_argument("chord_mean: exponent outside (0, 2]");
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += std::pow((samples[std::size_t((i + offset) % n)] - samples[std::size_t(i)]).norm(), p);
    return sum * length / n;
}

double circle_chord_bound(double length, double u, double p) {
    return std::pow(length, 1.0 + p) / std::pow(std::numbers::pi, p) * std::pow(std::sin(std::numbers::pi * u / length), p);
}

double polygon_chord_sum(std::span<const Vec2> points, double length, int k, double p) {
    const int n = int(points.size());
    if (n < 3) throw std::invalid_argument("polygon_chord_sum: at least three points required");
    if (!(p > 0.0 && p <= 2.0)) throw std::invalid_argument("polygon_chord_sum: exponent outside (0, 2]");
    const double spacing = length / n;
    for (int j = 0; j < n; ++j) {
        if ((points[(j + 1) % n] - points[j]).norm() > spacing * (1.0 + 1e-12)) {
            throw std::invalid_argument("polygon_chord_sum: spacing exceeds L/N");
        }
    }
    const int shift = ((k % n) + n) % n;
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += std::pow((points[(j + shift) % n] - points[j]).norm(), p);
    return sum;
}

double regular_polygon_chord_bound(int n, double length, int k, double p) {
    const double ratio = std::sin(std::numbers::pi * k / n) / std::sin(std::numbers::pi / n);
    return std::pow(double(n), 1.0 - p) * std::pow(length, p) * std::pow(std::fabs(ratio), p);
}

std::vector<Vec2> regular_polygon(int n, double perimeter) {
    if (n < 3) throw std::invalid_argument("regular_polygon: at least three vertices required");
    if (!(perimeter > 0.0)) throw std::invalid_argument("regular_polygon: perimeter must be positive");
    const double radius = perimeter / (2.0 * n * std::sin(std::numbers::pi / n));
    std::vector<Vec2> out;
    for (int j = 0; j < n; ++j) {
        const double t = 2.0 * std::numbers::pi * j / n;
        out.emplace_back(radius * std::cos(t), radius * std::sin(t));
    }
    return out;
}

std::vector<Vec2> loop_sites(const ArcCurve& loop, int n) {
    if (!loop.closed()) throw std::invalid_argument("loop_sites: loop must be closed");
    if (n < 3) throw std::invalid_argument("loop_sites: at least three sites required");
    std::vector<Vec2> out;
    for (int j = 0; j < n; ++j) out.push_back(loop.point(loop.length() * j / n));
    return out;
}

double enclosed_area(const ArcCurve& loop, int samples) {
    if (!loop.closed()) throw std::invalid_argument("enclosed_area: loop must be closed");
    if (loop.self_intersects(std::min(samples, 1024))) throw std::invalid_argument("enclosed_area: loop self-intersects");
    std::vector<Vec2> pts = loop.kind() == CurveKind::polyline ? std::vector<Vec2>{} : loop.sample(samples);
    if (loop.kind() == CurveKind::polyline) {
        pts.push_back(loop.point(0.0));
        for (double c : loop.corners()) pts.push_back(loop.point(c));
    }
    double area = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec2& a = pts[i];
        const Vec2& b = pts[(i + 1) % pts.size()];
        area += a.x() * b.y() - a.y() * b.x();
    }
    return 0.5 * std::fabs(area);
}

}  // namespace leaky

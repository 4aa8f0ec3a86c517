#include "leaky/bs_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "leaky/greens.hpp"
#include "leaky/quadrature.hpp"

namespace leaky {
namespace {

constexpr double kNearFactor = 1.5;   // panels closer than this many panel lengths get special rules
constexpr int kRefineOrder = 16;
constexpr double kGradedThreshold = 2.0;  // kappa * panel length above which product blocks are graded

// Ascending eigenvalues (and optionally vectors). Eigen's QR sweep occasionally stalls on nearly
// rank-one matrices; a diagonal shift moves it off the bad case.
struct SymmetricEigen {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

SymmetricEigen symmetric_solve(Eigen::MatrixXd m, bool vectors) {
    const int options = vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, options);
    double shift = 0.0;
    if (solver.info() != Eigen::Success) {
        shift = m.diagonal().mean();
        m.diagonal().array() -= shift;
        solver.compute(m, options);
        if (solver.info() != Eigen::Success) throw SolverError("symmetric eigensolver failed");
    }
    SymmetricEigen out{solver.eigenvalues().array() + shift, {}};
    if (vectors) out.vectors = solver.eigenvectors();
    return out;
}

std::vector<double> panel_lengths(double length, bool grade_start, bool grade_end, int lead_side, const MeshOptions& options,
                                  double target) {
    if (options.panels_per_edge > 0) {
        return std::vector<double>(options.panels_per_edge, length / options.panels_per_edge);
    }
    const double h = std::min(target, length / 4.0);
    const double r = options.grading_ratio;
    const int ends = int(grade_start) + int(grade_end);
    int levels = ends > 0 ? options.grading_levels : 0;
    double graded = 0.0;
    for (; levels > 0; --levels) {
        graded = 0.0;
        for (int k = 1; k <= levels; ++k) graded += h * std::pow(r, k);
        if (length - ends * graded >= h) break;
    }
    if (levels == 0) graded = 0.0;
    const double middle = length - ends * graded;
    std::vector<double> body;
    if (lead_side != 0 && options.lead_growth > 1.0) {
        // panels lengthen toward the truncated end of a lead, where the state is slowly varying
        double step = h;
        double sum = 0.0;
        while (sum < middle) {
            body.push_back(step);
            sum += step;
            step = std::min(step * options.lead_growth, h * options.lead_cap);
        }
        for (double& b : body) b *= middle / sum;
        if (lead_side < 0) std::reverse(body.begin(), body.end());
    } else {
        const int count = std::max(1, int(std::ceil(middle / h - 1e-9)));
        body.assign(std::size_t(count), middle / count);
    }
    std::vector<double> out;
    if (grade_start) {
        for (int k = levels; k >= 1; --k) out.push_back(h * std::pow(r, k));
    }
    out.insert(out.end(), body.begin(), body.end());
    if (grade_end) {
        for (int k = 1; k <= levels; ++k) out.push_back(h * std::pow(r, k));
    }
    return out;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 e = b - a;
    const double len2 = e.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(e) / len2, 0.0, 1.0);
    return (p - (a + t * e)).norm();
}

void parallel_rows(int rows, int threads, const std::function<void(int, int)>& work) {
    threads = std::max(1, std::min(threads, rows));
    if (threads == 1) {
        work(0, rows);
        return;
    }
    std::vector<std::thread> pool;
    const int chunk = (rows + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int begin = t * chunk;
        const int end = std::min(rows, begin + chunk);
        if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
}

}  // namespace

BSMesh::BSMesh(LeakyGraph graph, const MeshOptions& options) : graph_(std::move(graph)), options_(options) {
    graph_.validate();
    if (options_.panels_per_edge == 0 && !(options_.density >= 8.0)) {
        throw std::invalid_argument("mesh too coarse: density must be at least 8 nodes per 1/kappa");
    }
    if (options_.panels_per_edge != 0 && options_.panels_per_edge < 4) {
        throw std::invalid_argument("mesh too coarse: fewer than 4 panels per edge");
    }
    if (!(options_.grading_ratio > 0.0 && options_.grading_ratio < 1.0) || options_.grading_levels < 0) {
        throw std::invalid_argument("mesh grading parameters out of range");
    }
    if (!(options_.lead_growth >= 1.0 && options_.lead_growth <= 2.0) || !(options_.lead_cap >= 1.0)) {
        throw std::invalid_argument("lead growth parameters out of range");
    }
    const double kappa_ref = options_.kappa_ref > 0.0 ? options_.kappa_ref : 0.5 * graph_.alpha();
    const double target = kPanelOrder / (options_.density * kappa_ref);
    const GaussRule& rule = gauss_legendre(kPanelOrder);
    for (int e = 0; e < int(graph_.edges().size()); ++e) {
        const GraphEdge& edge = graph_.edges()[e];
        const ArcCurve& curve = edge.curve;
        const bool closed = curve.closed();
        const std::vector<double> lengths =
            panel_lengths(curve.length(), !closed && !edge.truncated_start, !closed && !edge.truncated_end,
                          int(edge.truncated_end && !edge.truncated_start) - int(edge.truncated_start && !edge.truncated_end), options_,
                          target);
        double start = 0.0;
        for (std::size_t p = 0; p < lengths.size(); ++p) {
            const double h = (p + 1 == lengths.size()) ? curve.length() - start : lengths[p];
            Panel panel{e, start, h, int(nodes_.size())};
            for (int m = 0; m < kPanelOrder; ++m) {
                const double s = start + 0.5 * h * (rule.nodes[m] + 1.0);
                nodes_.push_back({e, s, 0.5 * h * rule.weights[m], curve.point(s)});
            }
            const Vec2 center = curve.point(start + 0.5 * h);
            double radius = 0.0;
            for (int k = 0; k <= 8; ++k) radius = std::max(radius, (curve.point(start + h * k / 8.0) - center).norm());
            panels_.push_back(panel);
            panel_centers_.push_back(center);
            panel_radii_.push_back(radius);
            start += h;
        }
    }
}

std::vector<Incidence> BSMesh::incidences_at(int edge, double s) const {
    const ArcCurve& curve = graph_.edges().at(edge).curve;
    if (s < -1e-12 * curve.length() || s > curve.length() * (1.0 + 1e-12)) {
        throw std::out_of_range("arc position outside the edge");
    }
    std::vector<Incidence> out{{edge, s}};
    const double tol = 1e-12 * curve.length();
    if (!curve.closed() && (s <= tol || s >= curve.length() - tol)) {
        for (const EdgeEnd& other : graph_.neighbours({edge, s >= curve.length() - tol})) {
            const ArcCurve& c = graph_.edges()[other.edge].curve;
            out.push_back({other.edge, other.at_end ? c.length() : 0.0});
        }
    }
    return out;
}

std::vector<BSMesh::NearBlock> BSMesh::near_blocks(const Vec2& x, std::span<const Incidence> incidences) const {
    std::vector<NearBlock> out;
    const GaussRule& rule = gauss_legendre(kPanelOrder);
    for (int q = 0; q < int(panels_.size()); ++q) {
        const Panel& panel = panels_[q];
        const ArcCurve& curve = graph_.edges()[panel.edge].curve;
        const double h = panel.length;
        const double center_s = panel.start + 0.5 * h;
        bool product = false;
        double t0 = 0.0;
        for (const Incidence& inc : incidences) {
            if (inc.edge != panel.edge) continue;
            double d = inc.s - center_s;
            if (curve.closed()) {
                const double L = curve.length();
                d = std::remainder(d, L);
            }
            if (std::fabs(d) <= (0.5 + kNearFactor) * h) {
                product = true;
                t0 = 2.0 * d / h;
                break;
            }
        }
        if (!product) {
            if ((x - panel_centers_[q]).norm() - panel_radii_[q] >= kNearFactor * h) continue;
            double distance = std::numeric_limits<double>::infinity();
            Vec2 previous = curve.point(panel.start);
            for (int k = 1; k <= 16; ++k) {
                const Vec2 next = curve.point(panel.start + h * k / 16.0);
                distance = std::min(distance, point_segment_distance(x, previous, next));
                previous = next;
            }
            if (distance >= kNearFactor * h) continue;
        }
        NearBlock block;
        block.panel = q;
        block.product = product;
        block.target = x;
        block.t0 = t0;
        if (product) {
            const std::vector<double> lambda = log_product_weights(t0, kPanelOrder);
            for (int m = 0; m < kPanelOrder; ++m) {
                const QuadratureNode& node = nodes_[panel.first_node + m];
                const double sigma = 0.5 * h * std::fabs(rule.nodes[m] - t0);
                const double r = (x - node.position).norm();
                block.distance[m] = r;
                block.weight[m] = node.weight;
                block.log_weight[m] = 0.5 * h * (std::log(0.5 * h) * rule.weights[m] + lambda[m]);
                block.log_ratio[m] = (sigma > 0.0 && r > 0.0) ? std::log(r / sigma) : 0.0;
            }
        } else {
            const GaussRule& fine = gauss_legendre(kRefineOrder);
            std::vector<std::array<double, 2>> stack{{-1.0, 1.0}};
            std::vector<double> distances;
            std::vector<std::array<double, kPanelOrder>> weights;
            while (!stack.empty()) {
                const auto [lo, hi] = stack.back();
                stack.pop_back();
                const double s_lo = panel.start + 0.5 * h * (lo + 1.0);
                const double s_hi = panel.start + 0.5 * h * (hi + 1.0);
                const double sublength = s_hi - s_lo;
                const Vec2 a = curve.point(s_lo);
                const Vec2 b = curve.point(s_hi);
                const double d = std::min(point_segment_distance(x, a, b), (x - curve.point(0.5 * (s_lo + s_hi))).norm());
                if (d < 0.5 * sublength && sublength > 1e-14 * h) {
                    const double mid = 0.5 * (lo + hi);
                    stack.push_back({lo, mid});
                    stack.push_back({mid, hi});
                    continue;
                }
                for (int g = 0; g < kRefineOrder; ++g) {
                    const double t = 0.5 * (lo + hi) + 0.5 * (hi - lo) * fine.nodes[g];
                    const double s = panel.start + 0.5 * h * (t + 1.0);
                    const double r = (x - curve.point(s)).norm();
                    if (!(r > 0.0)) throw std::domain_error("evaluation point lies on the graph");
                    const double w = 0.5 * h * 0.5 * (hi - lo) * fine.weights[g];
                    const std::vector<double> basis = lagrange_basis(kPanelOrder, t);
                    std::array<double, kPanelOrder> row{};
                    for (int m = 0; m < kPanelOrder; ++m) row[m] = w * basis[m];
                    distances.push_back(r);
                    weights.push_back(row);
                }
            }
            block.sample_distance = distances;
            block.sample_weights.resize(Eigen::Index(distances.size()), kPanelOrder);
            for (std::size_t p = 0; p < weights.size(); ++p) {
                for (int m = 0; m < kPanelOrder; ++m) block.sample_weights(Eigen::Index(p), m) = weights[p][m];
            }
        }
        out.push_back(std::move(block));
    }
    return out;
}

void BSMesh::apply_block(const NearBlock& block, double kappa, double* row_segment) const {
    constexpr double inv2pi = 0.5 / std::numbers::pi;
    if (block.product && kappa * panels_[block.panel].length > kGradedThreshold) {
        graded_block(block, kappa, row_segment);
        return;
    }
    if (block.product) {
        const double log_kappa = std::log(kappa);
        for (int m = 0; m < kPanelOrder; ++m) {
            const K0Split split = k0_split(kappa * block.distance[m]);
            const double smooth = split.regular - (log_kappa + block.log_ratio[m]) * split.i0;
            row_segment[m] = inv2pi * (-split.i0 * block.log_weight[m] + smooth * block.weight[m]);
        }
        return;
    }
    for (int m = 0; m < kPanelOrder; ++m) row_segment[m] = 0.0;
    for (Eigen::Index p = 0; p < block.sample_weights.rows(); ++p) {
        const double kernel = inv2pi * k0(kappa * block.sample_distance[std::size_t(p)]);
        for (int m = 0; m < kPanelOrder; ++m) row_segment[m] += kernel * block.sample_weights(p, m);
    }
}

// The product split K0 = -ln(sigma) I0 + smooth cancels badly once I0 is large, so for panels long
// compared with 1/kappa the singular part is confined to a short interval around the incidence and
// the rest is integrated directly on pieces graded toward it.
void BSMesh::graded_block(const NearBlock& block, double kappa, double* row_segment) const {
    constexpr double inv2pi = 0.5 / std::numbers::pi;
    const Panel& panel = panels_[block.panel];
    const ArcCurve& curve = graph_.edges()[panel.edge].curve;
    const double h = panel.length;
    const double t0 = block.t0;
    const double inner = std::min(1.0, 0.5 / (kappa * h));  // half width in panel coordinates
    const GaussRule& fine = gauss_legendre(kRefineOrder);
    std::array<double, kPanelOrder> acc{};
    auto add = [&](double t, double value) {
        const std::vector<double> basis = lagrange_basis(kPanelOrder, t);
        for (int m = 0; m < kPanelOrder; ++m) acc[m] += value * basis[m];
    };
    auto point_at = [&](double t) { return curve.point(panel.start + 0.5 * h * (t + 1.0)); };
    const double a = std::max(-1.0, t0 - inner);
    const double b = std::min(1.0, t0 + inner);
    if (a < b) {
        const double c = 0.5 * (a + b);
        const double rho = 0.5 * (b - a);
        const double u0 = (t0 - c) / rho;
        const std::vector<double> lambda = log_product_weights(u0, kRefineOrder);
        const double log_kappa = std::log(kappa);
        const double log_scale = std::log(0.5 * h * rho);
        for (int g = 0; g < kRefineOrder; ++g) {
            const double t = c + rho * fine.nodes[g];
            const double r = (block.target - point_at(t)).norm();
            const double sigma = 0.5 * h * rho * std::fabs(fine.nodes[g] - u0);
            const double log_ratio = (sigma > 0.0 && r > 0.0) ? std::log(r / sigma) : 0.0;
            const K0Split split = k0_split(kappa * r);
            const double smooth = split.regular - (log_kappa + log_scale + log_ratio) * split.i0;
            add(t, 0.5 * h * rho * (-split.i0 * lambda[g] + smooth * fine.weights[g]));
        }
    }
    std::vector<std::array<double, 2>> stack;
    if (a < b) {
        if (a > -1.0) stack.push_back({-1.0, a});
        if (b < 1.0) stack.push_back({b, 1.0});
    } else {
        stack.push_back({-1.0, 1.0});
    }
    while (!stack.empty()) {
        const auto [lo, hi] = stack.back();
        stack.pop_back();
        const double gap = std::max({0.0, lo - t0, t0 - hi});
        if (hi - lo > std::max(gap, inner)) {
            const double mid = 0.5 * (lo + hi);
            stack.push_back({lo, mid});
            stack.push_back({mid, hi});
            continue;
        }
        for (int g = 0; g < kRefineOrder; ++g) {
            const double t = 0.5 * (lo + hi) + 0.5 * (hi - lo) * fine.nodes[g];
            const double r = (block.target - point_at(t)).norm();
            add(t, 0.5 * h * 0.5 * (hi - lo) * fine.weights[g] * k0(kappa * r));
        }
    }
    for (int m = 0; m < kPanelOrder; ++m) row_segment[m] = inv2pi * acc[m];
}

Eigen::RowVectorXd BSMesh::kernel_row(const Vec2& x, std::span<const Incidence> incidences, double kappa) const {
    if (!(kappa > 0.0)) throw std::domain_error("kappa must be positive");
    Eigen::RowVectorXd row(size());
    const std::vector<NearBlock> blocks = near_blocks(x, incidences);
    std::vector<int> special(panels_.size(), -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) special[blocks[b].panel] = int(b);
    constexpr double inv2pi = 0.5 / std::numbers::pi;
    for (int q = 0; q < int(panels_.size()); ++q) {
        const int first = panels_[q].first_node;
        if (special[q] >= 0) {
            apply_block(blocks[special[q]], kappa, row.data() + first);
            continue;
        }
        for (int m = 0; m < kPanelOrder; ++m) {
            const QuadratureNode& node = nodes_[first + m];
            row[first + m] = inv2pi * k0(kappa * (x - node.position).norm()) * node.weight;
        }
    }
    return row;
}

BSOperator::BSOperator(LeakyGraph graph, const MeshOptions& options) : mesh_(std::move(graph), options) {
    const int n = mesh_.size();
    const auto& nodes = mesh_.nodes();
    distance_.resize(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) distance_(i, j) = (nodes[i].position - nodes[j].position).norm();
    }
    near_.resize(n);
    parallel_rows(n, options.threads, [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            const Incidence self{nodes[i].edge, nodes[i].s};
            near_[i] = mesh_.near_blocks(nodes[i].position, std::span<const Incidence>(&self, 1));
        }
    });
}

Eigen::MatrixXd BSOperator::nystrom_matrix(double kappa) const {
    if (!(kappa > 0.0)) throw std::domain_error("kappa must be positive");
    const int n = size();
    const auto& nodes = mesh_.nodes();
    const auto& panels = mesh_.panels();
    const double scale = alpha() / (2.0 * std::numbers::pi);
    Eigen::MatrixXd a(n, n);
    parallel_rows(n, mesh_.options().threads, [&](int begin, int end) {
        std::vector<int> special(panels.size(), -1);
        std::array<double, kPanelOrder> segment{};
        for (int i = begin; i < end; ++i) {
            for (std::size_t b = 0; b < near_[i].size(); ++b) special[near_[i][b].panel] = int(b);
            for (int q = 0; q < int(panels.size()); ++q) {
                const int first = panels[q].first_node;
                if (special[q] >= 0) {
                    mesh_.apply_block(near_[i][special[q]], kappa, segment.data());
                    for (int m = 0; m < kPanelOrder; ++m) a(i, first + m) = alpha() * segment[m];
                    continue;
                }
                for (int m = 0; m < kPanelOrder; ++m) {
                    const int j = first + m;
                    a(i, j) = scale * k0(kappa * distance_(i, j)) * nodes[j].weight;
                }
            }
            for (const auto& block : near_[i]) special[block.panel] = -1;
        }
    });
    return a;
}

Eigen::MatrixXd BSOperator::symmetric_matrix(double kappa) const {
    Eigen::MatrixXd a = nystrom_matrix(kappa);
    const int n = size();
    Eigen::VectorXd root(n);
    for (int i = 0; i < n; ++i) root[i] = std::sqrt(mesh_.nodes()[i].weight);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) a(i, j) *= root[i] / root[j];
    }
    Eigen::MatrixXd b = 0.5 * (a + a.transpose());
    return b;
}

Eigen::VectorXd BSOperator::eigenvalues(double kappa) const {
    return symmetric_solve(symmetric_matrix(kappa), false).values.reverse();
}

BSOperator::NodalEigenpair BSOperator::refine(double kappa, double shift, const Eigen::VectorXd& start) const {
    const int n = size();
    Eigen::MatrixXd a = nystrom_matrix(kappa);
    const double sigma = shift + 1e-13 * std::max(1.0, std::fabs(shift));
    a.diagonal().array() -= sigma;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    Eigen::VectorXd x = start.normalized();
    double value = shift;
    for (int iter = 0; iter < 30; ++iter) {
        const Eigen::VectorXd y = lu.solve(x);
        const double next = sigma + 1.0 / x.dot(y);
        x = y.normalized();
        const bool settled = std::fabs(next - value) <= 1e-15 * std::max(1.0, std::fabs(next));
        value = next;
        if (iter >= 1 && settled) break;
    }
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm += mesh_.nodes()[i].weight * x[i] * x[i];
    return {value, x / std::sqrt(norm)};
}

BSOperator::NodalEigenpair BSOperator::eigenpair(double kappa, int j) const {
    if (j < 1 || j > size()) throw std::out_of_range("eigenvalue index exceeds matrix dimension");
    const SymmetricEigen eig = symmetric_solve(symmetric_matrix(kappa), true);
    const Eigen::Index column = size() - j;
    Eigen::VectorXd start = eig.vectors.col(column);
    for (int i = 0; i < size(); ++i) start[i] /= std::sqrt(mesh_.nodes()[i].weight);
    return refine(kappa, eig.values[column], start);
}

BSDiscretization assemble(const LeakyGraph& graph, double kappa, const MeshOptions& options) {
    BSOperator op(graph, options);
    return {op.mesh().graph(), kappa, op.mesh().nodes(), op.symmetric_matrix(kappa)};
}

double eigenvalue_curve(const BSOperator& op, int j, double kappa) { return op.eigenpair(kappa, j).value; }

double eigenvalue_curve(const LeakyGraph& graph, int j, double kappa, const MeshOptions& options) {
    return eigenvalue_curve(BSOperator(graph, options), j, kappa);
}

bool is_straight(const LeakyGraph& graph) {
    const auto& edges = graph.edges();
    if (edges.empty()) return false;
    const Vec2 origin = edges.front().curve.point(0.0);
    const Vec2 direction = edges.front().curve.tangent(0.0);
    auto on_line = [&](const Vec2& p) {
        const Vec2 d = p - origin;
        return std::fabs(d.x() * direction.y() - d.y() * direction.x()) <= 1e-12 * (1.0 + d.norm());
    };
    for (const auto& e : edges) {
        if (e.curve.kind() != CurveKind::segment && e.curve.kind() != CurveKind::polyline) return false;
        if (!on_line(e.curve.point(0.0)) || !on_line(e.curve.point(e.curve.length()))) return false;
    }
    return true;
}

SpectralResult find_bound_states(const BSOperator& op, int j_max, double tol) {
    const LeakyGraph& graph = op.mesh().graph();
    const double alpha = graph.alpha();
    SpectralResult result;
    result.method = "birman-schwinger";
    result.coupling = alpha;
    result.threshold = graph.threshold();
    for (const auto& node : op.mesh().nodes()) {
        result.support.push_back({Eigen::Vector3d(node.position.x(), node.position.y(), 0.0), node.weight, node.edge, node.s});
    }
    auto branches = [&](double kappa) { return op.eigenvalues(kappa); };
    std::vector<Crossing> crossings;
    if (graph.has_leads()) {
        crossings = solve_crossings({branches, 1.0, 0.5 * alpha * (1.0 + 1e-6), j_max, tol});
    } else {
        // compact graphs always bind; shrink the floor until the ground state is bracketed
        double floor = 1e-3;
        for (int attempt = 0; attempt < 6; ++attempt, floor *= 1e-3) {
            crossings = solve_crossings({branches, 1.0, floor, j_max, tol});
            if (!crossings.empty()) break;
        }
        if (floor < 1e-3) result.warnings.push_back("kappa floor lowered below 1e-3 to bracket a weakly bound state");
    }
    if (crossings.empty() && !is_straight(graph)) {
        throw SolverError("no eigenvalue crossing found for the ground state; refine the mesh or lengthen the truncation");
    }
    const int n = op.size();
    for (std::size_t j = 0; j < crossings.size(); ++j) {
        // the symmetric matrix brackets the crossing; the plain Nystrom matrix fixes it to full order
        const Crossing& c = crossings[j];
        const BSOperator::NodalEigenpair guess = op.eigenpair(0.5 * (c.lower + c.upper), int(j) + 1);
        auto mismatch = [&](double kappa, Eigen::VectorXd& phi) {
            BSOperator::NodalEigenpair pair = op.refine(kappa, 1.0, guess.phi);
            phi = pair.phi;
            return pair.value - 1.0;
        };
        Eigen::VectorXd phi;
        double k_a = c.lower;
        double k_b = c.upper;
        double f_a = mismatch(k_a, phi);
        double f_b = mismatch(k_b, phi);
        double kappa = k_b;
        double residual = std::fabs(f_b);
        for (int iter = 0; iter < 8 && f_a != f_b; ++iter) {
            kappa = k_b - f_b * (k_b - k_a) / (f_b - f_a);
            const double f = mismatch(kappa, phi);
            residual = std::fabs(f);
            if (residual < 1e-14 || std::fabs(kappa - k_b) < 1e-15 * kappa) break;
            k_a = k_b;
            f_a = f_b;
            k_b = kappa;
            f_b = f;
        }
        if (!(residual <= tol) || !(kappa > 0.0)) throw SolverError("crossing polish failed to converge");
        Eigen::VectorXd root(n);
        for (int i = 0; i < n; ++i) root[i] = std::sqrt(op.mesh().nodes()[i].weight);
        double orientation = phi.cwiseProduct(root).dot(root);
        if (std::fabs(orientation) < 1e-8 * std::sqrt(op.mesh().graph().total_length())) {
            Eigen::Index largest = 0;
            phi.cwiseAbs().maxCoeff(&largest);
            orientation = phi[largest];
        }
        if (orientation < 0.0) phi = -phi;
        BoundState state;
        state.index = int(j) + 1;
        state.kappa = kappa;
        state.energy = -kappa * kappa;
        state.coefficients = phi;
        state.residual = residual;
        result.states.push_back(std::move(state));
    }
    flag_multiplicities(result.states, tol);
    return result;
}

SpectralResult find_bound_states(const LeakyGraph& graph, int j_max, double tol, const MeshOptions& options) {
    return find_bound_states(BSOperator(graph, options), j_max, tol);
}

double eigenfunction_eval(const BSMesh& mesh, const BoundState& state, const Vec2& x) {
    if (state.coefficients.size() != mesh.size()) throw std::invalid_argument("state does not belong to this mesh");
    const double scale = std::max(1.0, mesh.graph().total_length());
    for (const auto& node : mesh.nodes()) {
        if ((node.position - x).norm() <= 1e-14 * scale) return eigenfunction_on_graph(mesh, state, node.edge, node.s);
    }
    const Eigen::RowVectorXd row = mesh.kernel_row(x, {}, state.kappa);
    return mesh.graph().alpha() * row.dot(state.coefficients);
}

double eigenfunction_eval(const LeakyGraph& graph, const MeshOptions& options, const BoundState& state, const Vec2& x) {
    return eigenfunction_eval(BSMesh(graph, options), state, x);
}

double eigenfunction_on_graph(const BSMesh& mesh, const BoundState& state, int edge, double s) {
    if (state.coefficients.size() != mesh.size()) throw std::invalid_argument("state does not belong to this mesh");
    const std::vector<Incidence> incidences = mesh.incidences_at(edge, s);
    const Vec2 x = mesh.graph().edges()[edge].curve.point(s);
    const Eigen::RowVectorXd row = mesh.kernel_row(x, incidences, state.kappa);
    return mesh.graph().alpha() * row.dot(state.coefficients);
}

double eigenfunction_norm_squared(const BSMesh& mesh, const BoundState& state) {
    if (state.coefficients.size() != mesh.size()) throw std::invalid_argument("state does not belong to this mesh");
    const auto& nodes = mesh.nodes();
    const double kappa = state.kappa;
    const double alpha = mesh.graph().alpha();
    const int n = mesh.size();
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double fi = nodes[i].weight * state.coefficients[i];
        double row = fi / kappa;  // r K1(kappa r) -> 1/kappa at r = 0
        for (int j = i + 1; j < n; ++j) {
            const double r = (nodes[i].position - nodes[j].position).norm();
            const double g = r > 0.0 ? r * k1(kappa * r) : 1.0 / kappa;
            row += 2.0 * g * nodes[j].weight * state.coefficients[j];
        }
        total += fi * row;
    }
    return alpha * alpha * total / (4.0 * std::numbers::pi * kappa);
}

LeakyGraph puncture(const LeakyGraph& graph, int edge, double s0, double epsilon) {
    if (edge < 0 || edge >= int(graph.edges().size())) throw std::out_of_range("puncture: edge index");
    if (!(epsilon > 0.0)) throw std::invalid_argument("puncture: epsilon must be positive");
    if (epsilon > 0.05 * graph.total_length()) throw std::invalid_argument("puncture exceeds 10% of the curve");
    const GraphEdge& target = graph.edges()[edge];
    const ArcCurve& curve = target.curve;
    LeakyGraph out(graph.alpha());
    for (int e = 0; e < int(graph.edges().size()); ++e) {
        const GraphEdge& current = graph.edges()[e];
        if (e != edge) {
            out.add_edge(current.curve, current.truncated_start, current.truncated_end);
            continue;
        }
        if (curve.closed()) {
            out.add_edge(curve.subcurve(s0 + epsilon, s0 - epsilon + curve.length()));
            continue;
        }
        if (!(s0 - epsilon > 0.0 && s0 + epsilon < curve.length())) {
            throw std::invalid_argument("puncture: removed arc must lie inside the edge");
        }
        out.add_edge(curve.subcurve(0.0, s0 - epsilon), target.truncated_start, false);
        out.add_edge(curve.subcurve(s0 + epsilon, curve.length()), false, target.truncated_end);
    }
    return out;
}

HiatusFit hiatus_slope(const LeakyGraph& graph, int edge, double s0, std::span<const double> epsilons, double tol,
                       const MeshOptions& options) {
    if (epsilons.size() < 2) throw std::invalid_argument("hiatus: at least two epsilon values required");
    HiatusFit fit;
    const BSMesh mesh(graph, options);
    const SpectralResult base = find_bound_states(BSOperator(graph, options), 1, tol);
    if (base.states.empty()) throw SolverError("hiatus: unpunctured graph has no bound state");
    const BoundState& ground = base.states.front();
    const double value = eigenfunction_on_graph(mesh, ground, edge, s0);
    fit.puncture_density = value * value / eigenfunction_norm_squared(mesh, ground);
    fit.predicted_slope = 2.0 * graph.alpha() * fit.puncture_density;
    fit.energy_unpunctured = ground.energy;
    for (double eps : epsilons) {
        const SpectralResult punctured = find_bound_states(puncture(graph, edge, s0, eps), 1, tol, options);
        if (punctured.states.empty()) throw SolverError("hiatus: punctured graph lost its bound state");
        fit.epsilons.push_back(eps);
        fit.energies.push_back(punctured.states.front().energy);
    }
    const std::size_t m = fit.epsilons.size();
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mean_x += fit.epsilons[i] / m;
        mean_y += fit.energies[i] / m;
    }
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (fit.epsilons[i] - mean_x) * (fit.epsilons[i] - mean_x);
        sxy += (fit.epsilons[i] - mean_x) * (fit.energies[i] - mean_y);
    }
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    // E(eps) - E(0) = a eps + b eps^2 ln(eps) + c eps^2; the log term is the leading correction
    const bool with_log = m >= 3;
    Eigen::MatrixXd design(static_cast<Eigen::Index>(m), with_log ? 3 : 2);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        const Eigen::Index r = static_cast<Eigen::Index>(i);
        const double eps = fit.epsilons[i];
        design(r, 0) = eps;
        design(r, 1) = eps * eps;
        if (with_log) design(r, 2) = eps * eps * std::log(eps);
        rhs[r] = fit.energies[i] - fit.energy_unpunctured;
    }
    fit.derivative = design.colPivHouseholderQr().solve(rhs)[0];
    return fit;
}

}  // namespace leaky

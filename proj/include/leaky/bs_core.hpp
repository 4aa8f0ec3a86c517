#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "leaky/geometry.hpp"
#include "leaky/spectral.hpp"

namespace leaky {

struct MeshOptions {
    double density = 16.0;     // nodes per unit of 1/kappa_ref
    double kappa_ref = 0.0;    // 0 selects alpha/2
    int panels_per_edge = 0;   // > 0: that many uniform panels per edge, no grading
    int grading_levels = 12;
    double grading_ratio = 0.7;
    double lead_growth = 1.1;  // panel length ratio along truncated leads, away from the graph (1 = uniform)
    double lead_cap = 16.0;    // longest lead panel in units of the base panel
    int threads = 1;
};

inline constexpr int kPanelOrder = 8;

struct QuadratureNode {
    int edge = 0;
    double s = 0.0;
    double weight = 0.0;
    Vec2 position = Vec2::Zero();
};

struct Panel {
    int edge = 0;
    double start = 0.0;
    double length = 0.0;
    int first_node = 0;
};

// A point of the graph given by arc position on an edge.
struct Incidence {
    int edge = 0;
    double s = 0.0;
};

// Gauss-Legendre panels on every edge, graded toward vertices and free ends.
class BSMesh {
public:
    BSMesh(LeakyGraph graph, const MeshOptions& options);

    const LeakyGraph& graph() const { return graph_; }
    const MeshOptions& options() const { return options_; }
    const std::vector<QuadratureNode>& nodes() const { return nodes_; }
    const std::vector<Panel>& panels() const { return panels_; }
    int size() const { return int(nodes_.size()); }

    // Coefficients c_n with int (1/2pi) K0(kappa |x - gamma(s)|) f(s) ds ~ sum c_n f(s_n).
    // Incidences list the graph positions equal to x (empty for points off the graph).
    Eigen::RowVectorXd kernel_row(const Vec2& x, std::span<const Incidence> incidences, double kappa) const;

    // Graph positions coinciding with the point at (edge, s), including other edges at a shared vertex.
    std::vector<Incidence> incidences_at(int edge, double s) const;

    struct NearBlock {
        int panel = 0;
        bool product = false;
        // product rule: per node distance, log weight, plain weight, ln(distance / arc offset)
        std::array<double, kPanelOrder> distance{};
        std::array<double, kPanelOrder> log_weight{};
        std::array<double, kPanelOrder> weight{};
        std::array<double, kPanelOrder> log_ratio{};
        // graded fallback when kappa * h is large: target point and singular offset in panel coordinates
        Vec2 target = Vec2::Zero();
        double t0 = 0.0;
        // refined rule: sample distances and their interpolation weights onto the panel nodes
        std::vector<double> sample_distance;
        Eigen::Matrix<double, Eigen::Dynamic, kPanelOrder> sample_weights;
    };
    std::vector<NearBlock> near_blocks(const Vec2& x, std::span<const Incidence> incidences) const;
    void apply_block(const NearBlock& block, double kappa, double* row_segment) const;

private:
    void graded_block(const NearBlock& block, double kappa, double* row_segment) const;

    LeakyGraph graph_;
    MeshOptions options_;
    std::vector<QuadratureNode> nodes_;
    std::vector<Panel> panels_;
    std::vector<Vec2> panel_centers_;
    std::vector<double> panel_radii_;
};

// Nystrom discretization of alpha R_{m,m} at energy -kappa^2, reusable across kappa.
class BSOperator {
public:
    BSOperator(LeakyGraph graph, const MeshOptions& options);

    const BSMesh& mesh() const { return mesh_; }
    int size() const { return mesh_.size(); }
    double alpha() const { return mesh_.graph().alpha(); }

    // Plain Nystrom matrix: (A f)_i ~ alpha int R(gamma(s_i), gamma(s)) f(s) ds.
    Eigen::MatrixXd nystrom_matrix(double kappa) const;
    // W^{1/2} A W^{-1/2}, symmetrized; shares its spectrum with A up to quadrature error.
    Eigen::MatrixXd symmetric_matrix(double kappa) const;
    // Eigenvalues of the symmetric matrix in descending order.
    Eigen::VectorXd eigenvalues(double kappa) const;

    // Eigenpair of the plain Nystrom matrix nearest `shift`, by inverse iteration from `start` (node values).
    struct NodalEigenpair {
        double value = 0.0;
        Eigen::VectorXd phi;  // normalized: sum w phi^2 = 1
    };
    NodalEigenpair refine(double kappa, double shift, const Eigen::VectorXd& start) const;
    // j-th symmetric eigenpair (j from 1) polished on the plain Nystrom matrix.
    NodalEigenpair eigenpair(double kappa, int j) const;

private:
    BSMesh mesh_;
    Eigen::MatrixXd distance_;
    std::vector<std::vector<BSMesh::NearBlock>> near_;  // per target node
};

struct BSDiscretization {
    LeakyGraph graph;
    double kappa = 0.0;
    std::vector<QuadratureNode> nodes;
    Eigen::MatrixXd matrix;
};

BSDiscretization assemble(const LeakyGraph& graph, double kappa, const MeshOptions& options = {});

// j-th largest eigenvalue (j from 1) of the discretized operator.
double eigenvalue_curve(const BSOperator& op, int j, double kappa);
double eigenvalue_curve(const LeakyGraph& graph, int j, double kappa, const MeshOptions& options = {});

SpectralResult find_bound_states(const BSOperator& op, int j_max, double tol);
SpectralResult find_bound_states(const LeakyGraph& graph, int j_max, double tol, const MeshOptions& options = {});

// psi(x) = alpha int G(x - gamma(s)) phi(s) ds for a state of find_bound_states on the same mesh.
double eigenfunction_eval(const BSMesh& mesh, const BoundState& state, const Vec2& x);
double eigenfunction_eval(const LeakyGraph& graph, const MeshOptions& options, const BoundState& state, const Vec2& x);
// Same on the graph itself at (edge, s).
double eigenfunction_on_graph(const BSMesh& mesh, const BoundState& state, int edge, double s);
// Squared L2 norm of psi over the plane.
double eigenfunction_norm_squared(const BSMesh& mesh, const BoundState& state);

bool is_straight(const LeakyGraph& graph);

struct HiatusFit {
    double slope = 0.0;           // least-squares slope of E1 against epsilon
    double intercept = 0.0;
    double derivative = 0.0;      // dE1/d epsilon at zero from a fit through E1(0) with the eps^2 ln eps term
    double predicted_slope = 0.0; // 2 alpha |psi(puncture)|^2 / |psi|^2
    double puncture_density = 0.0;
    double energy_unpunctured = 0.0;
    std::vector<double> epsilons;
    std::vector<double> energies;
};

// Removes the arc (s0 - eps, s0 + eps) of one edge and tracks the ground state energy.
HiatusFit hiatus_slope(const LeakyGraph& graph, int edge, double s0, std::span<const double> epsilons, double tol,
                       const MeshOptions& options = {});
LeakyGraph puncture(const LeakyGraph& graph, int edge, double s0, double epsilon);

}  // namespace leaky

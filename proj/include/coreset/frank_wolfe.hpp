#pragma once

#include "coreset/hull.hpp"

namespace coreset {

/// Mutable state of one Frank-Wolfe run against a fixed hull vertex.
/// Single-owner: runs for different vertices are independent.
struct FWState {
    Eigen::VectorXd w;        // current w~, dense over N
    Eigen::VectorXd combined; // L(w~) in projected space
    Eigen::VectorXd target;   // L^(i) = sum_n p_n u_n
    double sigma = 0.0;       // sigma^(i) = sum_n p_n ||u_n||
    std::vector<double> objective_trace;     // J~ after init and each step
    std::vector<Eigen::Index> selected_indices; // f_0, f_1, ...
    std::vector<double> step_sizes;             // gamma_1, gamma_2, ...
    bool converged = false;

    double objective() const { return objective_trace.back(); }
    Eigen::Index steps() const {
        return static_cast<Eigen::Index>(objective_trace.size()) - 1;
    }
};

/// Greedy initialization: puts the full budget sigma/||u_f0|| on the row
/// best aligned with the vertex's total loss. Ties pick the lowest index.
/// Throws DegenerateInstanceError when every row has zero norm.
FWState fw_initialize(const ProjectionSpace& space, const ProbabilityVector& vertex);

/// One Frank-Wolfe step with the closed-form line search, clamped into
/// [0,1]. A zero residual (or coincident vertex) makes the step a no-op.
void fw_step(const ProjectionSpace& space, FWState& state);

/// Output of Algorithm 1: the solution for the hull vertex whose final
/// objective is largest, with the per-iteration trace of that run.
struct CoresetSolution {
    CoresetWeights weights;
    ProbabilityVector vertex; // p^(I)
    Eigen::Index vertex_index = 0;
    std::vector<double> objective_trace;
    std::vector<Eigen::Index> selected_indices;
    std::vector<double> step_sizes;
    std::vector<double> final_objectives; // one per hull vertex
    Eigen::Index m = 0;
    bool converged = false;
};

/// Algorithm 1: greedy initialization plus m-1 Frank-Wolfe steps for every
/// hull vertex, returning the maximizing vertex's solution. Runs for
/// distinct vertices may execute in parallel.
CoresetSolution run_algorithm1(const ProjectionSpace& space, const ConvexHull& hull,
                               Eigen::Index m);

} // namespace coreset

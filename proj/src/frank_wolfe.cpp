#include "coreset/frank_wolfe.hpp"

#include "coreset/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace coreset {

namespace {

// Below this objective the residual direction is numerically meaningless;
// further steps would risk 0/0 in the line search.
constexpr double kConvergedObjective = 1e-14;

Eigen::Index argmax_alignment(const ProjectionSpace& space, const Eigen::VectorXd& direction) {
    const Eigen::VectorXd scores = space.u * direction;
    Eigen::Index best = -1;
    double best_score = 0.0;
    for (const Eigen::Index n : space.active) { // ascending: ties keep the lowest index
        const double score = scores[n] / space.norms[n];
        if (best < 0 || score > best_score) {
            best = n;
            best_score = score;
        }
    }
    return best;
}

double squared_norm(const Eigen::VectorXd& v) {
    return dot_accumulate(v.data(), v.data(), v.size());
}

} // namespace

FWState fw_initialize(const ProjectionSpace& space, const ProbabilityVector& vertex) {
    if (vertex.size() != space.n_data()) {
        throw DimensionError("fw_initialize: vertex length " + std::to_string(vertex.size()) +
                             " does not match N = " + std::to_string(space.n_data()));
    }
    if (space.active.empty()) {
        throw DegenerateInstanceError("every loss row has zero norm; no Frank-Wolfe vertex exists");
    }

    FWState state;
    state.sigma = 0.0;
    for (Eigen::Index n = 0; n < space.n_data(); ++n) {
        state.sigma += vertex.p[n] * space.norms[n];
    }
    state.target = combine(space, vertex.p);

    const Eigen::Index f0 = argmax_alignment(space, state.target);
    state.w = Eigen::VectorXd::Zero(space.n_data());
    state.w[f0] = state.sigma / space.norms[f0];
    state.combined = state.w[f0] * space.u.row(f0).transpose();
    state.selected_indices.push_back(f0);
    state.objective_trace.push_back(squared_norm(state.target - state.combined));
    state.converged = state.objective_trace.back() < kConvergedObjective;
    return state;
}

void fw_step(const ProjectionSpace& space, FWState& state) {
    if (state.converged) return;

    const Eigen::VectorXd residual = state.target - state.combined;
    const Eigen::Index f = argmax_alignment(space, residual);

    const Eigen::VectorXd fw_vertex =
        (state.sigma / space.norms[f]) * space.u.row(f).transpose();
    const Eigen::VectorXd direction = fw_vertex - state.combined;
    const double denom = squared_norm(direction);

    double gamma = 0.0; // coincident vertex: stay put
    if (denom > 0.0) {
        gamma = direction.dot(residual) / denom;
        gamma = std::clamp(gamma, 0.0, 1.0);
    }

    state.w *= (1.0 - gamma);
    state.w[f] += gamma * state.sigma / space.norms[f];
    state.combined = (1.0 - gamma) * state.combined + gamma * fw_vertex;
    state.selected_indices.push_back(f);
    state.step_sizes.push_back(gamma);
    state.objective_trace.push_back(squared_norm(state.target - state.combined));
    state.converged = state.objective_trace.back() < kConvergedObjective;
}

CoresetSolution run_algorithm1(const ProjectionSpace& space, const ConvexHull& hull,
                               Eigen::Index m) {
    if (m < 1) throw ConfigError("run_algorithm1 needs m >= 1");
    if (hull.n_data() != space.n_data()) {
        throw DimensionError("hull is over N = " + std::to_string(hull.n_data()) +
                             " but the projection space has N = " +
                             std::to_string(space.n_data()));
    }

    const Eigen::Index k = hull.n_vertices();
    std::vector<FWState> states(static_cast<std::size_t>(k));
    parallel_for(k, [&](std::int64_t i) {
        FWState state = fw_initialize(space, hull.vertices[static_cast<std::size_t>(i)]);
        for (Eigen::Index t = 1; t < m && !state.converged; ++t) {
            fw_step(space, state);
        }
        states[static_cast<std::size_t>(i)] = std::move(state);
    });

    std::vector<std::pair<CoresetWeights, ProbabilityVector>> candidates;
    candidates.reserve(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) {
        candidates.emplace_back(
            CoresetWeights::from_dense(states[static_cast<std::size_t>(i)].w, i),
            hull.vertices[static_cast<std::size_t>(i)]);
    }
    const std::size_t selected = max_over_vertices(space, candidates);

    CoresetSolution solution;
    solution.weights = std::move(candidates[selected].first);
    solution.vertex = hull.vertices[selected];
    solution.vertex_index = static_cast<Eigen::Index>(selected);
    solution.objective_trace = states[selected].objective_trace;
    solution.selected_indices = states[selected].selected_indices;
    solution.step_sizes = states[selected].step_sizes;
    solution.m = m;
    solution.converged = states[selected].converged;
    solution.final_objectives.reserve(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) {
        solution.final_objectives.push_back(
            states[static_cast<std::size_t>(i)].objective_trace.back());
    }
    return solution;
}

} // namespace coreset

#pragma once

#include "coreset/geometry.hpp"

#include <utility>
#include <vector>

namespace coreset {

/// A probability mass vector over the N data points.
struct ProbabilityVector {
    Eigen::VectorXd p;
    bool strictly_positive = false;

    Eigen::Index size() const { return p.size(); }

    /// Validates nonnegativity and unit sum (1e-9 absolute). Sums within
    /// 1e-6 of one are renormalized with a logged warning; anything further
    /// off is a ValidationError. Records whether every entry is positive.
    static ProbabilityVector validated(Eigen::VectorXd p);
};

/// The data-distribution class: the convex hull of K probability vectors.
struct ConvexHull {
    std::vector<ProbabilityVector> vertices;

    Eigen::Index n_vertices() const {
        return static_cast<Eigen::Index>(vertices.size());
    }
    Eigen::Index n_data() const {
        return vertices.empty() ? 0 : vertices.front().size();
    }

    static ConvexHull validated(std::vector<ProbabilityVector> vertices);
    /// K = 1 hull with the uniform vector p_n = 1/N.
    static ConvexHull uniform(Eigen::Index n);
};

/// Sparse nonnegative reweighting of the data, tied to the hull vertex whose
/// polytope it lives in: sum_n w[n] * ||u_n|| equals that vertex's sigma.
struct CoresetWeights {
    std::vector<Eigen::Index> indices; // sorted, strictly increasing
    std::vector<double> weights;       // positive, parallel to indices
    Eigen::Index n = 0;                // ambient dimension N
    Eigen::Index vertex_index = 0;     // hull vertex I this solution targets

    Eigen::Index nnz() const { return static_cast<Eigen::Index>(indices.size()); }
    double l1_norm() const;
    Eigen::VectorXd to_dense() const;
    static CoresetWeights from_dense(const Eigen::VectorXd& dense,
                                     Eigen::Index vertex_index);
};

/// The two-argument objective J~(w, p) = (w - p)^T K~ (w - p), i.e. the
/// squared projected distance between the reweighted and true total losses.
double objective(const ProjectionSpace& space, const CoresetWeights& w,
                 const ProbabilityVector& p);

/// Index of the (weights, vertex) pair maximizing J~; ties resolve to the
/// lowest index. Throws EmptyInputError on an empty list.
std::size_t max_over_vertices(
    const ProjectionSpace& space,
    const std::vector<std::pair<CoresetWeights, ProbabilityVector>>& solutions);

enum class RadiusMode { automatic, exact, heuristic };

/// Distance from L = sum_n p[n] u_n to the relative boundary of the hull of
/// the scaled vertices (sigma / ||u_n||) u_n. Exact facet enumeration runs
/// when at most 12 rows are non-degenerate; otherwise a leave-one-out
/// support-function estimate that can only underestimate the true distance
/// (a smaller radius loosens but never invalidates the bound). A vertex with
/// a zero entry degrades to r = 0 with a logged warning.
double estimate_radius(const ProjectionSpace& space, const ProbabilityVector& vertex,
                       RadiusMode mode = RadiusMode::automatic);

} // namespace coreset

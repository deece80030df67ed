#pragma once

#include "coreset/geometry.hpp"
#include "coreset/hull.hpp"
#include "coreset/rng.hpp"

#include <vector>

namespace coreset::testing {

// Loss matrix whose PROJECTED rows equal the given vectors (undoes the
// sqrt(1/J) scaling), so tests can state geometry directly in u-space.
inline LossMatrix matrix_with_projected_rows(const std::vector<std::vector<double>>& rows) {
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index j = static_cast<Eigen::Index>(rows.front().size());
    LossMatrix losses;
    losses.kind = LossKind::custom;
    losses.values.resize(n, j);
    const double scale = std::sqrt(static_cast<double>(j));
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < j; ++c) {
            losses.values(r, c) = scale * rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        }
    }
    return losses;
}

inline LossMatrix matrix_from_rows(const std::vector<std::vector<double>>& rows,
                                   LossKind kind = LossKind::custom) {
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index j = static_cast<Eigen::Index>(rows.front().size());
    LossMatrix losses;
    losses.kind = kind;
    losses.values.resize(n, j);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < j; ++c) {
            losses.values(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        }
    }
    return losses;
}

// The hand-worked instance: orthonormal projected rows u0 = (1,0), u1 = (0,1).
inline ProjectionSpace worked_example_space(GramMode mode = GramMode::automatic) {
    return build_projection(matrix_with_projected_rows({{1.0, 0.0}, {0.0, 1.0}}), mode);
}

inline LossMatrix random_loss_matrix(Rng& rng, Eigen::Index n, Eigen::Index j) {
    LossMatrix losses;
    losses.kind = LossKind::custom;
    losses.values.resize(n, j);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < j; ++c) {
            losses.values(r, c) = rng.uniform() + 0.1; // positive, no degenerate rows
        }
    }
    return losses;
}

// Strictly interior probability vector: Dirichlet(1) draw mixed with the
// uniform vector to stay bounded away from the simplex boundary.
inline ProbabilityVector random_interior_vertex(Rng& rng, Eigen::Index n) {
    Eigen::VectorXd p(n);
    for (Eigen::Index i = 0; i < n; ++i) p[i] = -std::log(rng.uniform_open());
    p /= p.sum();
    p = 0.8 * p + Eigen::VectorXd::Constant(n, 0.2 / static_cast<double>(n));
    return ProbabilityVector::validated(p);
}

inline ConvexHull random_interior_hull(Rng& rng, Eigen::Index k, Eigen::Index n) {
    std::vector<ProbabilityVector> vertices;
    for (Eigen::Index i = 0; i < k; ++i) vertices.push_back(random_interior_vertex(rng, n));
    return ConvexHull::validated(std::move(vertices));
}

} // namespace coreset::testing

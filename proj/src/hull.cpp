#include "coreset/hull.hpp"

#include "coreset/log.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace coreset {

namespace {

constexpr double kSumTolerance = 1e-9;       // accepted as-is
constexpr double kRenormalizeLimit = 1e-6;   // renormalized with a warning
constexpr double kNegativeClamp = -1e-12;    // file rounding can dip below zero
constexpr Eigen::Index kExactRadiusLimit = 12;

} // namespace

ProbabilityVector ProbabilityVector::validated(Eigen::VectorXd p) {
    if (p.size() < 1) throw ValidationError("probability vector is empty");
    for (Eigen::Index n = 0; n < p.size(); ++n) {
        if (!std::isfinite(p[n])) {
            throw ValidationError("probability entry " + std::to_string(n) + " is not finite");
        }
        if (p[n] < 0.0) {
            if (p[n] < kNegativeClamp) {
                throw ValidationError("probability entry " + std::to_string(n) +
                                      " is negative: " + std::to_string(p[n]));
            }
            p[n] = 0.0;
        }
    }
    const double sum = p.sum();
    const double drift = std::abs(sum - 1.0);
    if (drift > kSumTolerance) {
        if (drift > kRenormalizeLimit || sum <= 0.0) {
            throw ValidationError("probability vector sums to " + std::to_string(sum) +
                                  ", outside the 1e-6 renormalization window");
        }
        log::warn("probability vector sum " + std::to_string(sum) + " renormalized to 1");
        p /= sum;
    }
    ProbabilityVector out;
    out.strictly_positive = (p.array() > 0.0).all();
    out.p = std::move(p);
    return out;
}

ConvexHull ConvexHull::validated(std::vector<ProbabilityVector> vertices) {
    if (vertices.empty()) throw ValidationError("convex hull needs at least one vertex");
    const Eigen::Index n = vertices.front().size();
    for (const auto& v : vertices) {
        if (v.size() != n) {
            throw DimensionError("hull vertices disagree on N: " + std::to_string(v.size()) +
                                 " vs " + std::to_string(n));
        }
    }
    ConvexHull hull;
    hull.vertices = std::move(vertices);
    return hull;
}

ConvexHull ConvexHull::uniform(Eigen::Index n) {
    if (n < 1) throw ValidationError("uniform hull needs N >= 1");
    Eigen::VectorXd p = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    return validated({ProbabilityVector::validated(std::move(p))});
}

double CoresetWeights::l1_norm() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

Eigen::VectorXd CoresetWeights::to_dense() const {
    Eigen::VectorXd dense = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < indices.size(); ++k) dense[indices[k]] = weights[k];
    return dense;
}

CoresetWeights CoresetWeights::from_dense(const Eigen::VectorXd& dense,
                                          Eigen::Index vertex_index) {
    CoresetWeights out;
    out.n = dense.size();
    out.vertex_index = vertex_index;
    for (Eigen::Index i = 0; i < dense.size(); ++i) {
        if (dense[i] < 0.0) {
            throw ValidationError("coreset weight " + std::to_string(i) + " is negative");
        }
        if (dense[i] > 0.0) {
            out.indices.push_back(i);
            out.weights.push_back(dense[i]);
        }
    }
    return out;
}

double objective(const ProjectionSpace& space, const CoresetWeights& w,
                 const ProbabilityVector& p) {
    if (w.n != space.n_data() || p.size() != space.n_data()) {
        throw DimensionError("objective: weights/vertex dimensions do not match N = " +
                             std::to_string(space.n_data()));
    }
    const double norm = weighted_norm(space, w.to_dense() - p.p);
    return norm * norm;
}

std::size_t max_over_vertices(
    const ProjectionSpace& space,
    const std::vector<std::pair<CoresetWeights, ProbabilityVector>>& solutions) {
    if (solutions.empty()) throw EmptyInputError("max_over_vertices: empty solution list");
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < solutions.size(); ++i) {
        const double value = objective(space, solutions[i].first, solutions[i].second);
        if (value > best_value) { // strict: ties keep the lowest index
            best_value = value;
            best = i;
        }
    }
    return best;
}

namespace {

// Scaled vertex rows (sigma/||u_n||) u_n for the active rows, plus
// L = sum_n p_n u_n, all in R^J.
struct ScaledHull {
    Eigen::MatrixXd vertices; // |A| x J
    Eigen::VectorXd center;   // L
};

ScaledHull build_scaled_hull(const ProjectionSpace& space, const ProbabilityVector& vertex,
                             double sigma) {
    ScaledHull out;
    const auto& active = space.active;
    out.vertices.resize(static_cast<Eigen::Index>(active.size()), space.n_samples());
    for (std::size_t k = 0; k < active.size(); ++k) {
        const Eigen::Index row = active[k];
        out.vertices.row(static_cast<Eigen::Index>(k)) =
            (sigma / space.norms[row]) * space.u.row(row);
    }
    out.center = combine(space, vertex.p);
    return out;
}

// Exact distance from an interior point to the relative boundary: the minimum
// over facets of the distance to the facet's hyperplane, computed inside the
// affine hull of the scaled vertices. Facets are found by enumerating
// d-subsets and keeping the supporting ones.
double radius_exact(const ScaledHull& hull) {
    const Eigen::Index count = hull.vertices.rows();
    if (count <= 1) return 0.0;

    // Orthonormal basis of the affine hull.
    Eigen::MatrixXd diffs(hull.vertices.cols(), count - 1);
    for (Eigen::Index k = 1; k < count; ++k) {
        diffs.col(k - 1) = (hull.vertices.row(k) - hull.vertices.row(0)).transpose();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(diffs, Eigen::ComputeThinU);
    const auto& singular = svd.singularValues();
    const double spread = singular.size() > 0 ? singular[0] : 0.0;
    if (spread <= 0.0) return 0.0; // all vertices coincide
    // Keep near-zero directions as real dimensions: dropping a thin direction
    // could overestimate the boundary distance, never the reverse.
    const double rank_tol = spread * 1e-12;
    Eigen::Index dim = 0;
    while (dim < singular.size() && singular[dim] > rank_tol) ++dim;
    if (dim == 0) return 0.0;

    const Eigen::MatrixXd basis = svd.matrixU().leftCols(dim); // J x d
    Eigen::MatrixXd coords(count, dim);
    for (Eigen::Index k = 0; k < count; ++k) {
        coords.row(k) =
            ((hull.vertices.row(k) - hull.vertices.row(0)) * basis);
    }
    const Eigen::RowVectorXd center_coords =
        (hull.center.transpose() - hull.vertices.row(0)) * basis;

    double scale = 0.0;
    for (Eigen::Index k = 0; k < count; ++k) scale = std::max(scale, coords.row(k).norm());
    const double side_tol = 1e-9 * (1.0 + scale);

    // Enumerate subsets of size d; each supporting subset spans a facet
    // hyperplane. Every facet contains some affinely independent d-subset,
    // so the minimum over supporting subsets is the boundary distance.
    std::vector<Eigen::Index> subset(static_cast<std::size_t>(dim));
    std::iota(subset.begin(), subset.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    for (;;) {
        do {
            if (dim == 1) {
                // Hyperplanes in a 1-D hull are points.
                const double at = coords(subset[0], 0);
                double lo = std::numeric_limits<double>::infinity();
                double hi = -std::numeric_limits<double>::infinity();
                for (Eigen::Index k = 0; k < count; ++k) {
                    lo = std::min(lo, coords(k, 0));
                    hi = std::max(hi, coords(k, 0));
                }
                if (at <= lo + side_tol || at >= hi - side_tol) {
                    best = std::min(best, std::abs(center_coords[0] - at));
                    found = true;
                }
                break;
            }
            Eigen::MatrixXd plane(dim - 1, dim);
            for (Eigen::Index i = 1; i < dim; ++i) {
                plane.row(i - 1) = coords.row(subset[static_cast<std::size_t>(i)]) -
                                   coords.row(subset[0]);
            }
            Eigen::JacobiSVD<Eigen::MatrixXd> plane_svd(plane, Eigen::ComputeFullV);
            const auto& plane_singular = plane_svd.singularValues();
            // Affinely dependent subsets span no unique hyperplane; another
            // subset of the same facet will be independent, so skip them.
            if (dim >= 2 && plane_singular.size() >= dim - 1 &&
                plane_singular[dim - 2] <= side_tol) {
                break;
            }
            const Eigen::VectorXd normal = plane_svd.matrixV().col(dim - 1);
            const double offset = normal.dot(coords.row(subset[0]).transpose());
            double lowest = std::numeric_limits<double>::infinity();
            double highest = -std::numeric_limits<double>::infinity();
            for (Eigen::Index k = 0; k < count; ++k) {
                const double side = normal.dot(coords.row(k).transpose()) - offset;
                lowest = std::min(lowest, side);
                highest = std::max(highest, side);
            }
            if (lowest >= -side_tol || highest <= side_tol) {
                best = std::min(best,
                                std::abs(normal.dot(center_coords.transpose()) - offset));
                found = true;
            }
        } while (false);

        // Next subset in lexicographic order.
        Eigen::Index pos = dim - 1;
        while (pos >= 0 && subset[static_cast<std::size_t>(pos)] == count - dim + pos) --pos;
        if (pos < 0) break;
        ++subset[static_cast<std::size_t>(pos)];
        for (Eigen::Index i = pos + 1; i < dim; ++i) {
            subset[static_cast<std::size_t>(i)] = subset[static_cast<std::size_t>(i - 1)] + 1;
        }
    }
    if (!found) {
        log::warn("radius facet enumeration found no supporting hyperplane; returning 0");
        return 0.0;
    }
    return best;
}

// Lower bound on min over leave-one-out hulls of dist(L, Conv(V \ {v_n})),
// which itself lower-bounds the boundary distance. Each leave-out is bounded
// through support functions along a small direction set, so the estimate can
// only come out small, never too large.
double radius_heuristic(const ScaledHull& hull) {
    const Eigen::Index count = hull.vertices.rows();
    if (count <= 1) return 0.0;

    std::vector<Eigen::Index> order(static_cast<std::size_t>(count));
    std::iota(order.begin(), order.end(), 0);
    Eigen::VectorXd vertex_distance(count);
    for (Eigen::Index k = 0; k < count; ++k) {
        vertex_distance[k] = (hull.vertices.row(k).transpose() - hull.center).norm();
    }

    const bool per_vertex_directions = count <= 512;
    std::vector<Eigen::Index> direction_ids;
    if (per_vertex_directions) {
        direction_ids = order;
    } else {
        // Nearest vertices to L are the likeliest to define the close boundary.
        std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return vertex_distance[a] < vertex_distance[b];
        });
        direction_ids.assign(order.begin(), order.begin() + 32);
    }

    Eigen::VectorXd best_bound = Eigen::VectorXd::Constant(count, 0.0);
    for (const Eigen::Index id : direction_ids) {
        Eigen::VectorXd g = hull.vertices.row(id).transpose() - hull.center;
        const double g_norm = g.norm();
        if (g_norm <= 0.0) continue;
        g /= g_norm;
        const Eigen::VectorXd supports = hull.vertices * g; // <g, v_k> for all k
        const double center_support = g.dot(hull.center);
        // Top-2 supports let us take max over "all but one" in O(1).
        Eigen::Index top = 0;
        for (Eigen::Index k = 1; k < count; ++k) {
            if (supports[k] > supports[top]) top = k;
        }
        double second = -std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < count; ++k) {
            if (k != top) second = std::max(second, supports[k]);
        }
        for (Eigen::Index leave = 0; leave < count; ++leave) {
            const double remaining_max = (leave == top) ? second : supports[top];
            best_bound[leave] = std::max(best_bound[leave], center_support - remaining_max);
        }
    }
    double radius = best_bound.minCoeff();
    // Never exceed the nearest vertex distance.
    radius = std::min(radius, vertex_distance.minCoeff());
    return std::max(radius, 0.0);
}

} // namespace

double estimate_radius(const ProjectionSpace& space, const ProbabilityVector& vertex,
                       RadiusMode mode) {
    if (vertex.size() != space.n_data()) {
        throw DimensionError("estimate_radius: vertex length " + std::to_string(vertex.size()) +
                             " does not match N = " + std::to_string(space.n_data()));
    }
    if (!vertex.strictly_positive || vertex.p.minCoeff() <= 0.0) {
        log::warn("boundary vertex (zero probability entry); radius degrades to 0");
        return 0.0;
    }
    double sigma = 0.0;
    for (Eigen::Index n = 0; n < space.n_data(); ++n) sigma += vertex.p[n] * space.norms[n];
    if (sigma <= 0.0 || space.active.size() <= 1) return 0.0;

    const ScaledHull scaled = build_scaled_hull(space, vertex, sigma);
    const bool exact =
        mode == RadiusMode::exact ||
        (mode == RadiusMode::automatic &&
         static_cast<Eigen::Index>(space.active.size()) <= kExactRadiusLimit);
    double radius = exact ? radius_exact(scaled) : radius_heuristic(scaled);

    double nearest_vertex = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < scaled.vertices.rows(); ++k) {
        nearest_vertex =
            std::min(nearest_vertex, (scaled.vertices.row(k).transpose() - scaled.center).norm());
    }
    return std::max(0.0, std::min(radius, nearest_vertex));
}

} // namespace coreset

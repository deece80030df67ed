#include "coreset/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace coreset::oracle {

namespace {

constexpr double kConvergedObjective = 1e-14;

// Visits every composition (a_0..a_{k-1}) of `total` into k nonnegative parts.
void for_each_composition(int k, int total,
                          const std::function<void(const std::vector<int>&)>& visit) {
    std::vector<int> parts(static_cast<std::size_t>(k), 0);
    std::function<void(int, int)> recurse = [&](int pos, int remaining) {
        if (pos == k - 1) {
            parts[static_cast<std::size_t>(pos)] = remaining;
            visit(parts);
            return;
        }
        for (int a = 0; a <= remaining; ++a) {
            parts[static_cast<std::size_t>(pos)] = a;
            recurse(pos + 1, remaining - a);
        }
    };
    recurse(0, total);
}

double composition_count(int k, int total) {
    // C(total + k - 1, k - 1)
    double count = 1.0;
    for (int i = 1; i <= k - 1; ++i) {
        count *= static_cast<double>(total + i) / static_cast<double>(i);
    }
    return count;
}

} // namespace

double brute_inner(const LossMatrix& losses, Eigen::Index n, Eigen::Index m) {
    if (n < 0 || n >= losses.n_data() || m < 0 || m >= losses.n_data()) {
        throw IndexError("brute_inner index out of range");
    }
    double acc = 0.0;
    for (Eigen::Index j = 0; j < losses.n_samples(); ++j) {
        acc += losses.values(n, j) * losses.values(m, j);
    }
    return acc / static_cast<double>(losses.n_samples());
}

double grid_max_over_hull(const ProjectionSpace& space, const CoresetWeights& w,
                          const ConvexHull& hull, int resolution) {
    if (resolution < 2) throw ConfigError("grid resolution must be >= 2");
    const int k = static_cast<int>(hull.n_vertices());
    const int steps = resolution - 1;
    if (composition_count(k, steps) > 2e6) {
        throw ResourceError("barycentric grid would exceed 2e6 points");
    }

    // Projected combinations, computed with plain Eigen arithmetic.
    Eigen::VectorXd u_w = Eigen::VectorXd::Zero(space.n_samples());
    const Eigen::VectorXd w_dense = w.to_dense();
    for (Eigen::Index n = 0; n < space.n_data(); ++n) {
        if (w_dense[n] != 0.0) u_w += w_dense[n] * space.u.row(n).transpose();
    }
    std::vector<Eigen::VectorXd> vertex_combined;
    for (const auto& vertex : hull.vertices) {
        Eigen::VectorXd combined = Eigen::VectorXd::Zero(space.n_samples());
        for (Eigen::Index n = 0; n < space.n_data(); ++n) {
            combined += vertex.p[n] * space.u.row(n).transpose();
        }
        vertex_combined.push_back(std::move(combined));
    }

    double best = -std::numeric_limits<double>::infinity();
    for_each_composition(k, steps, [&](const std::vector<int>& parts) {
        Eigen::VectorXd diff = u_w;
        for (int i = 0; i < k; ++i) {
            if (parts[static_cast<std::size_t>(i)] == 0) continue;
            const double lambda = static_cast<double>(parts[static_cast<std::size_t>(i)]) /
                                  static_cast<double>(steps);
            diff -= lambda * vertex_combined[static_cast<std::size_t>(i)];
        }
        best = std::max(best, diff.squaredNorm());
    });
    return best;
}

CoresetSolution reference_fw_k1(const ProjectionSpace& space, const ProbabilityVector& p,
                                Eigen::Index m) {
    if (p.size() != space.n_data()) throw DimensionError("reference_fw_k1 dimension mismatch");
    if (m < 1) throw ConfigError("reference_fw_k1 needs m >= 1");
    for (Eigen::Index n = 0; n < p.size(); ++n) {
        if (p.p[n] <= 0.0) {
            throw PreconditionError("reference_fw_k1 requires strictly positive p");
        }
    }

    const Eigen::Index n_rows = space.n_data();
    const Eigen::Index dim = space.n_samples();

    // Campbell coordinates: L_n = p_n u_n with norms s_n, budget sum(s_n).
    Eigen::MatrixXd scaled(n_rows, dim);
    Eigen::VectorXd s(n_rows);
    Eigen::VectorXd total = Eigen::VectorXd::Zero(dim);
    double budget = 0.0;
    for (Eigen::Index n = 0; n < n_rows; ++n) {
        scaled.row(n) = p.p[n] * space.u.row(n);
        s[n] = scaled.row(n).norm();
        total += scaled.row(n).transpose();
        budget += s[n];
    }
    if (budget <= 0.0) throw DegenerateInstanceError("all rows degenerate");

    auto argmax_scores = [&](const Eigen::VectorXd& direction) {
        Eigen::Index best = -1;
        double best_score = 0.0;
        for (Eigen::Index n = 0; n < n_rows; ++n) {
            if (s[n] == 0.0) continue;
            const double score = scaled.row(n).dot(direction) / s[n];
            if (best < 0 || score > best_score) {
                best = n;
                best_score = score;
            }
        }
        return best;
    };

    Eigen::VectorXd w = Eigen::VectorXd::Zero(n_rows);
    const Eigen::Index f0 = argmax_scores(total);
    w[f0] = budget / s[f0];
    Eigen::VectorXd combined = w[f0] * scaled.row(f0).transpose();

    CoresetSolution solution;
    solution.vertex = p;
    solution.vertex_index = 0;
    solution.m = m;
    solution.selected_indices.push_back(f0);
    solution.objective_trace.push_back((total - combined).squaredNorm());

    for (Eigen::Index t = 1; t < m; ++t) {
        if (solution.objective_trace.back() < kConvergedObjective) {
            solution.converged = true;
            break;
        }
        const Eigen::VectorXd residual = total - combined;
        const Eigen::Index f = argmax_scores(residual);
        const Eigen::VectorXd vertex_point = (budget / s[f]) * scaled.row(f).transpose();
        const Eigen::VectorXd direction = vertex_point - combined;
        const double denom = direction.squaredNorm();
        double gamma = 0.0;
        if (denom > 0.0) gamma = std::clamp(direction.dot(residual) / denom, 0.0, 1.0);
        w *= (1.0 - gamma);
        w[f] += gamma * budget / s[f];
        combined = (1.0 - gamma) * combined + gamma * vertex_point;
        solution.selected_indices.push_back(f);
        solution.step_sizes.push_back(gamma);
        solution.objective_trace.push_back((total - combined).squaredNorm());
    }

    // Back to w~ coordinates: w~_n = p_n w_n.
    Eigen::VectorXd w_tilde = w.cwiseProduct(p.p);
    solution.weights = CoresetWeights::from_dense(w_tilde, 0);
    solution.final_objectives.push_back(solution.objective_trace.back());
    solution.converged =
        solution.converged || solution.objective_trace.back() < kConvergedObjective;
    return solution;
}

double radius_by_boundary_sampling(const ProjectionSpace& space,
                                   const ProbabilityVector& vertex, int resolution) {
    if (resolution < 2) throw ConfigError("boundary sampling resolution must be >= 2");
    const auto& active = space.active;
    const int k = static_cast<int>(active.size());
    if (k < 2) return 0.0;
    if (k > 6) throw ResourceError("boundary sampling supports at most 6 active rows");
    if (composition_count(k - 1, resolution - 1) * k > 5e6) {
        throw ResourceError("boundary sampling lattice too large");
    }

    double sigma = 0.0;
    for (Eigen::Index n = 0; n < space.n_data(); ++n) {
        sigma += vertex.p[n] * space.norms[n];
    }
    Eigen::MatrixXd scaled(k, space.n_samples());
    for (int i = 0; i < k; ++i) {
        const Eigen::Index row = active[static_cast<std::size_t>(i)];
        scaled.row(i) = (sigma / space.norms[row]) * space.u.row(row);
    }
    Eigen::VectorXd center = Eigen::VectorXd::Zero(space.n_samples());
    for (Eigen::Index n = 0; n < space.n_data(); ++n) {
        center += vertex.p[n] * space.u.row(n).transpose();
    }

    // Each boundary face of the simplex drops one vertex; sample them all.
    double best = std::numeric_limits<double>::infinity();
    const int steps = resolution - 1;
    for (int dropped = 0; dropped < k; ++dropped) {
        std::vector<int> face;
        for (int i = 0; i < k; ++i) {
            if (i != dropped) face.push_back(i);
        }
        for_each_composition(k - 1, steps, [&](const std::vector<int>& parts) {
            Eigen::VectorXd point = Eigen::VectorXd::Zero(space.n_samples());
            for (int i = 0; i < k - 1; ++i) {
                const double lambda = static_cast<double>(parts[static_cast<std::size_t>(i)]) /
                                      static_cast<double>(steps);
                if (lambda != 0.0) {
                    point += lambda * scaled.row(face[static_cast<std::size_t>(i)]).transpose();
                }
            }
            best = std::min(best, (point - center).norm());
        });
    }
    return best;
}

} // namespace coreset::oracle

#pragma once

#include "coreset/errors.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <vector>

namespace coreset {

using RowMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class LossKind : std::uint8_t {
    zero_one = 0,
    cross_entropy = 1,
    custom = 2,
};

/// Per-datum losses at J shared posterior samples. Row n holds the losses of
/// datum n; this matrix is the only bridge between models and the geometry.
struct LossMatrix {
    RowMatrixXd values; // N x J
    LossKind kind = LossKind::custom;

    Eigen::Index n_data() const { return values.rows(); }
    Eigen::Index n_samples() const { return values.cols(); }

    // Throws InvalidLossError (naming row/column) on non-finite entries, or
    // entries outside {0,1} when kind is zero_one. N, J must be >= 1.
    void validate() const;
};

enum class GramMode { automatic, eager, lazy };

/// Scaled projection vectors u_n = sqrt(1/J) * row n of the loss matrix,
/// their norms, and (optionally) the full Gram matrix of pairwise inner
/// products. Immutable after construction; safe for concurrent reads.
struct ProjectionSpace {
    RowMatrixXd u;                      // N x J
    Eigen::VectorXd norms;              // ||u_n||
    std::optional<Eigen::MatrixXd> gram; // K~ with K~(n,m) = u_n . u_m
    std::vector<Eigen::Index> active;   // rows with nonzero norm

    Eigen::Index n_data() const { return u.rows(); }
    Eigen::Index n_samples() const { return u.cols(); }
    bool degenerate(Eigen::Index n) const { return norms[n] == 0.0; }
};

// Dot product with plain accumulation up to 4096 terms and pairwise
// splitting beyond, so results are reproducible and well conditioned.
double dot_accumulate(const double* a, const double* b, Eigen::Index len);

/// Builds the projected space from a validated loss matrix. Deterministic
/// given its input. The Gram matrix is materialized for N <= 20000 under
/// GramMode::automatic (dense storage stays desk-sized), always under eager,
/// never under lazy.
ProjectionSpace build_projection(const LossMatrix& losses,
                                 GramMode mode = GramMode::automatic);

/// u_n . u_m, the Monte-Carlo estimate of <l_n, l_m>. Symmetric in (n, m).
double inner(const ProjectionSpace& space, Eigen::Index n, Eigen::Index m);

/// sum_n coeffs[n] * u_n as a J-vector.
Eigen::VectorXd combine(const ProjectionSpace& space,
                        const Eigen::VectorXd& coeffs);

/// || sum_n coeffs[n] * u_n ||. Uses the Gram quadratic form when it is
/// materialized and the explicit vector sum otherwise; the two routes agree
/// to 1e-10 relative.
double weighted_norm(const ProjectionSpace& space,
                     const Eigen::VectorXd& coeffs);

/// Explicit vector-sum route, exposed so tests can cross-check the Gram path.
double weighted_norm_direct(const ProjectionSpace& space,
                            const Eigen::VectorXd& coeffs);

} // namespace coreset

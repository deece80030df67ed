#include "coreset/geometry.hpp"

#include "coreset/parallel.hpp"

#include <cmath>
#include <string>

namespace coreset {

namespace {

constexpr Eigen::Index kPlainSumLimit = 4096;
constexpr Eigen::Index kDenseGramLimit = 20000;

} // namespace

double dot_accumulate(const double* a, const double* b, Eigen::Index len) {
    if (len <= kPlainSumLimit) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < len; ++i) acc += a[i] * b[i];
        return acc;
    }
    const Eigen::Index half = len / 2;
    return dot_accumulate(a, b, half) +
           dot_accumulate(a + half, b + half, len - half);
}

void LossMatrix::validate() const {
    if (n_data() < 1 || n_samples() < 1) {
        throw InvalidLossError("loss matrix must have N >= 1 rows and J >= 1 columns");
    }
    for (Eigen::Index n = 0; n < n_data(); ++n) {
        for (Eigen::Index j = 0; j < n_samples(); ++j) {
            const double v = values(n, j);
            if (!std::isfinite(v)) {
                throw InvalidLossError("non-finite loss at row " + std::to_string(n) +
                                       ", column " + std::to_string(j));
            }
            if (kind == LossKind::zero_one && v != 0.0 && v != 1.0) {
                throw InvalidLossError("zero-one loss entry " + std::to_string(v) +
                                       " at row " + std::to_string(n) + ", column " +
                                       std::to_string(j) + " is outside {0,1}");
            }
        }
    }
}

ProjectionSpace build_projection(const LossMatrix& losses, GramMode mode) {
    losses.validate();
    const Eigen::Index n = losses.n_data();
    const Eigen::Index j = losses.n_samples();

    ProjectionSpace space;
    space.u = losses.values * std::sqrt(1.0 / static_cast<double>(j));
    space.norms.resize(n);
    for (Eigen::Index row = 0; row < n; ++row) {
        space.norms[row] =
            std::sqrt(dot_accumulate(space.u.row(row).data(), space.u.row(row).data(), j));
    }
    for (Eigen::Index row = 0; row < n; ++row) {
        if (space.norms[row] > 0.0) space.active.push_back(row);
    }

    const bool materialize =
        mode == GramMode::eager || (mode == GramMode::automatic && n <= kDenseGramLimit);
    if (materialize) {
        Eigen::MatrixXd gram(n, n);
        parallel_for(n, [&](std::int64_t row) {
            for (Eigen::Index col = row; col < n; ++col) {
                gram(row, col) =
                    dot_accumulate(space.u.row(row).data(), space.u.row(col).data(), j);
            }
        });
        for (Eigen::Index row = 0; row < n; ++row) {
            for (Eigen::Index col = 0; col < row; ++col) {
                gram(row, col) = gram(col, row);
            }
        }
        space.gram = std::move(gram);
    }
    return space;
}

double inner(const ProjectionSpace& space, Eigen::Index n, Eigen::Index m) {
    if (n < 0 || n >= space.n_data() || m < 0 || m >= space.n_data()) {
        throw IndexError("inner(" + std::to_string(n) + ", " + std::to_string(m) +
                         ") out of range for N = " + std::to_string(space.n_data()));
    }
    if (space.gram) return (*space.gram)(n, m);
    return dot_accumulate(space.u.row(n).data(), space.u.row(m).data(), space.n_samples());
}

Eigen::VectorXd combine(const ProjectionSpace& space, const Eigen::VectorXd& coeffs) {
    if (coeffs.size() != space.n_data()) {
        throw DimensionError("coefficient vector has length " + std::to_string(coeffs.size()) +
                             ", expected " + std::to_string(space.n_data()));
    }
    Eigen::VectorXd out = Eigen::VectorXd::Zero(space.n_samples());
    for (Eigen::Index n = 0; n < space.n_data(); ++n) {
        const double c = coeffs[n];
        if (c != 0.0) out += c * space.u.row(n).transpose();
    }
    return out;
}

double weighted_norm_direct(const ProjectionSpace& space, const Eigen::VectorXd& coeffs) {
    const Eigen::VectorXd v = combine(space, coeffs);
    return std::sqrt(dot_accumulate(v.data(), v.data(), v.size()));
}

double weighted_norm(const ProjectionSpace& space, const Eigen::VectorXd& coeffs) {
    if (!space.gram) return weighted_norm_direct(space, coeffs);
    if (coeffs.size() != space.n_data()) {
        throw DimensionError("coefficient vector has length " + std::to_string(coeffs.size()) +
                             ", expected " + std::to_string(space.n_data()));
    }
    const double quad = coeffs.dot(*space.gram * coeffs);
    return std::sqrt(std::max(quad, 0.0)); // roundoff can push the PSD form below zero
}

} // namespace coreset

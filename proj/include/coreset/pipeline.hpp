#pragma once

#include "coreset/bounds.hpp"
#include "coreset/io.hpp"
#include "coreset/posterior.hpp"

#include <filesystem>
#include <vector>

namespace coreset {

/// Everything the gen stage needs: data source, model, training, posterior,
/// and sampling parameters. One seed drives the whole stage.
struct GenConfig {
    Eigen::Index n_data = 200;
    Eigen::Index dim = 2;
    double separation = 4.0;
    std::string dataset_csv; // nonempty: ingest instead of synthesizing
    Eigen::Index checkpoint = 0; // 0 -> half the data

    Architecture arch = Architecture::logistic;
    Eigen::Index hidden_width = 8;
    Eigen::Index epochs = 200;
    double learning_rate = 0.5;

    double prior_std = 1e-4;
    Eigen::Index n_samples = 1000;
    LossKind loss = LossKind::zero_one;
    std::uint64_t seed = 0;

    Eigen::Index resolved_checkpoint(Eigen::Index n) const {
        return checkpoint > 0 ? checkpoint : n / 2;
    }
};

struct GenArtifacts {
    Dataset dataset;
    ReferenceModel model;
    io::TrainingMeta meta;
    PosteriorSpec posterior;
    LossMatrix losses;
};

/// Dataset -> trained model -> diagonal-Hessian posterior -> loss matrix.
GenArtifacts run_gen(const GenConfig& config);

/// Writes dataset.csv, model.json, posterior.json, losses.lmat into out_dir.
void write_gen(const std::filesystem::path& out_dir, const GenArtifacts& artifacts,
               const GenConfig& config);

struct BoundOutcome {
    CoresetSolution solution;
    BoundReport report;
    VerificationResult checks;
};

/// Algorithm 1 + Theorem 2 + the built-in verification pass.
BoundOutcome run_bound(const ProjectionSpace& space, const ConvexHull& hull, Eigen::Index m,
                       const BoundConfig& config);

struct SweepRow {
    Eigen::Index checkpoint = 0;
    double bound_I = 0.0;
    double bound_II = 0.0;
    double expected_risk = 0.0;
};

/// One pipeline run per checkpoint (nested prefixes of one shared dataset,
/// retrained each time); m defaults to the checkpoint size. Rows come back
/// sorted by checkpoint.
std::vector<SweepRow> run_sweep(const GenConfig& base, std::vector<Eigen::Index> checkpoints,
                                const BoundConfig& bound_config, Eigen::Index m_override = 0);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

} // namespace coreset

#include "coreset/pipeline.hpp"

#include "coreset/log.hpp"
#include "coreset/rng.hpp"

#include <algorithm>

namespace coreset {

GenArtifacts run_gen(const GenConfig& config) {
    if (config.n_samples < 1) throw ConfigError("gen needs J >= 1");
    if (!(config.prior_std > 0.0)) throw ConfigError("prior_std must be positive");

    // Independent sub-streams so stages stay decoupled under one seed.
    Rng master(config.seed);
    const std::uint64_t data_seed = master.derive();
    const std::uint64_t train_seed = master.derive();
    const std::uint64_t sample_seed = master.derive();

    GenArtifacts artifacts;
    if (!config.dataset_csv.empty()) {
        artifacts.dataset = io::read_dataset_csv(config.dataset_csv);
    } else {
        artifacts.dataset = make_blobs(config.n_data, config.dim, config.separation, data_seed);
    }
    const Eigen::Index checkpoint = config.resolved_checkpoint(artifacts.dataset.n_data());
    if (checkpoint < 1 || checkpoint > artifacts.dataset.n_data()) {
        throw ConfigError("checkpoint size " + std::to_string(checkpoint) +
                          " out of range for N = " + std::to_string(artifacts.dataset.n_data()));
    }
    artifacts.dataset.checkpoint_size = checkpoint;

    TrainOptions options;
    options.epochs = config.epochs;
    options.learning_rate = config.learning_rate;
    options.seed = train_seed;
    artifacts.model =
        train_reference(artifacts.dataset, config.arch, config.hidden_width, options);

    artifacts.meta.epochs = config.epochs;
    artifacts.meta.learning_rate = config.learning_rate;
    artifacts.meta.checkpoint_size = checkpoint;
    artifacts.meta.final_cross_entropy =
        cross_entropy_loss(artifacts.model, artifacts.dataset, checkpoint);
    const Eigen::VectorXd det_losses =
        deterministic_losses(artifacts.model, artifacts.dataset, LossKind::zero_one);
    artifacts.meta.training_error = det_losses.head(checkpoint).mean();

    const Eigen::VectorXd hessian =
        diagonal_hessian(artifacts.model, artifacts.dataset, checkpoint);
    artifacts.posterior = build_posterior(artifacts.model.theta, hessian, config.prior_std);
    artifacts.losses = sample_losses(artifacts.model, artifacts.posterior, artifacts.dataset,
                                     config.n_samples, sample_seed, config.loss);
    return artifacts;
}

void write_gen(const std::filesystem::path& out_dir, const GenArtifacts& artifacts,
               const GenConfig& config) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
    io::write_dataset_csv(out_dir / "dataset.csv", artifacts.dataset);
    io::write_model_json(out_dir / "model.json", artifacts.model, config.seed, artifacts.meta);
    io::write_posterior_json(out_dir / "posterior.json", artifacts.posterior);
    io::write_lmat(out_dir / "losses.lmat", artifacts.losses);
}

BoundOutcome run_bound(const ProjectionSpace& space, const ConvexHull& hull, Eigen::Index m,
                       const BoundConfig& config) {
    BoundOutcome outcome;
    if (space.active.empty()) {
        // Identically zero losses: the empty coreset reproduces the total
        // loss exactly, so skip Algorithm 1 instead of erroring out.
        log::warn("all loss rows are zero; using the empty coreset");
        if (m < 1) throw ConfigError("run_bound needs m >= 1");
        CoresetSolution trivial;
        trivial.weights.n = space.n_data();
        trivial.vertex = hull.vertices.front();
        trivial.vertex_index = 0;
        trivial.objective_trace.push_back(0.0);
        trivial.final_objectives.assign(static_cast<std::size_t>(hull.n_vertices()), 0.0);
        trivial.m = m;
        trivial.converged = true;
        outcome.solution = std::move(trivial);
    } else {
        outcome.solution = run_algorithm1(space, hull, m);
    }
    outcome.report = theorem2_bounds(space, hull, outcome.solution, config);
    outcome.checks = verify_bound(space, hull, outcome.solution, outcome.report);
    return outcome;
}

std::vector<SweepRow> run_sweep(const GenConfig& base, std::vector<Eigen::Index> checkpoints,
                                const BoundConfig& bound_config, Eigen::Index m_override) {
    if (checkpoints.empty()) throw ConfigError("sweep needs at least one checkpoint");
    std::sort(checkpoints.begin(), checkpoints.end());
    std::vector<SweepRow> rows;
    for (const Eigen::Index checkpoint : checkpoints) {
        GenConfig config = base;
        config.checkpoint = checkpoint;
        const GenArtifacts artifacts = run_gen(config);
        const ProjectionSpace space = build_projection(artifacts.losses);
        const ConvexHull hull = ConvexHull::uniform(artifacts.dataset.n_data());
        const Eigen::Index m = m_override > 0 ? m_override : checkpoint;
        const BoundOutcome outcome = run_bound(space, hull, m, bound_config);
        rows.push_back({checkpoint, outcome.report.bound_I, outcome.report.bound_II,
                        outcome.report.expected_risk_estimate});
    }
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "checkpoint_size,bound_I,bound_II,eer\n";
    for (const auto& row : rows) {
        out += std::to_string(row.checkpoint);
        out += ',';
        out += io::format_double(row.bound_I);
        out += ',';
        out += io::format_double(row.bound_II);
        out += ',';
        out += io::format_double(row.expected_risk);
        out += '\n';
    }
    return out;
}

} // namespace coreset

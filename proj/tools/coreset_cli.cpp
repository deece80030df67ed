#include "coreset/oracle.hpp"
#include "coreset/pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

namespace {

using namespace coreset;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitComputation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

LossKind loss_kind_from_string(const std::string& name) {
    if (name == "zero_one" || name == "0-1") return LossKind::zero_one;
    if (name == "cross_entropy") return LossKind::cross_entropy;
    if (name == "custom") return LossKind::custom;
    throw UsageError("unknown loss kind '" + name + "'");
}

struct LossInput {
    std::string path;
    std::string format = "lmat";
    std::string loss_kind = "custom"; // CSV carries no kind header
};

LossMatrix load_losses(const LossInput& input) {
    if (input.format == "lmat") return io::read_lmat(input.path);
    if (input.format == "csv") {
        return io::read_loss_csv(input.path, loss_kind_from_string(input.loss_kind));
    }
    throw UsageError("unknown --format '" + input.format + "' (use lmat|csv)");
}

struct HullInput {
    std::string path;
    bool uniform = false;
};

ConvexHull load_hull(const HullInput& input, Eigen::Index n_data) {
    if (input.uniform != input.path.empty()) {
        throw UsageError("pass exactly one of --hull PATH or --uniform");
    }
    if (input.uniform) return ConvexHull::uniform(n_data);
    ConvexHull hull = io::read_hull_json(input.path);
    if (hull.n_data() != n_data) {
        throw DimensionError("hull is over N = " + std::to_string(hull.n_data()) +
                             " but the loss matrix has N = " + std::to_string(n_data));
    }
    return hull;
}

void emit(const std::string& content, const std::string& out_dir, const std::string& filename) {
    if (out_dir.empty()) {
        std::cout << content;
        return;
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
    std::ofstream out(std::filesystem::path(out_dir) / filename,
                      std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + filename + " under " + out_dir);
    out << content;
}

void add_gen_options(CLI::App* cmd, GenConfig& config, std::string& arch,
                     std::string& loss_kind) {
    cmd->add_option("--n-data", config.n_data, "full sample size N");
    cmd->add_option("--dim", config.dim, "input dimension of synthetic blobs");
    cmd->add_option("--separation", config.separation, "blob center separation");
    cmd->add_option("--dataset", config.dataset_csv, "ingest a labeled CSV instead");
    cmd->add_option("--checkpoint", config.checkpoint, "training checkpoint size (default N/2)");
    cmd->add_option("--arch", arch, "logistic|mlp_1hidden");
    cmd->add_option("--hidden-width", config.hidden_width, "hidden width for mlp_1hidden");
    cmd->add_option("--epochs", config.epochs, "training epochs");
    cmd->add_option("--lr", config.learning_rate, "learning rate");
    cmd->add_option("--prior-std", config.prior_std, "prior standard deviation");
    cmd->add_option("--samples", config.n_samples, "posterior samples J");
    cmd->add_option("--loss", loss_kind, "zero_one|cross_entropy");
    cmd->add_option("--seed", config.seed, "random seed");
}

json oracle_records(const ProjectionSpace& space, const ConvexHull& hull,
                    const LossMatrix& losses, const CoresetSolution& solution) {
    json records = json::array();

    // Dual-route inner products on a leading block.
    {
        const Eigen::Index limit = std::min<Eigen::Index>(space.n_data(), 5);
        double worst = 0.0;
        for (Eigen::Index n = 0; n < limit; ++n) {
            for (Eigen::Index m = 0; m < limit; ++m) {
                worst = std::max(worst,
                                 std::abs(inner(space, n, m) - oracle::brute_inner(losses, n, m)));
            }
        }
        records.push_back({{"name", "brute_inner_agreement"},
                           {"passed", worst <= 1e-12},
                           {"measured", worst},
                           {"limit", 1e-12}});
    }

    // K = 1 hulls have an independent Frank-Wolfe construction to match.
    if (hull.n_vertices() == 1 && hull.vertices.front().strictly_positive &&
        space.n_data() <= 500) {
        const CoresetSolution reference =
            oracle::reference_fw_k1(space, hull.vertices.front(), solution.m);
        bool same_support = reference.weights.indices == solution.weights.indices;
        double worst = 0.0;
        if (same_support) {
            for (std::size_t k = 0; k < reference.weights.weights.size(); ++k) {
                worst = std::max(worst, std::abs(reference.weights.weights[k] -
                                                 solution.weights.weights[k]));
            }
        }
        records.push_back({{"name", "k1_reference_match"},
                           {"passed", same_support && worst <= 1e-9},
                           {"measured", worst},
                           {"limit", 1e-9}});
    }

    // Small instances allow a barycentric sweep of the hull interior.
    if (hull.n_vertices() <= 4 && space.n_data() <= 8) {
        const double grid = oracle::grid_max_over_hull(space, solution.weights, hull, 25);
        std::vector<std::pair<CoresetWeights, ProbabilityVector>> candidates;
        for (const auto& vertex : hull.vertices) {
            candidates.emplace_back(solution.weights, vertex);
        }
        const std::size_t best = max_over_vertices(space, candidates);
        const double vertex_max =
            objective(space, solution.weights, hull.vertices[best]);
        records.push_back({{"name", "vertex_optimality_grid"},
                           {"passed", grid <= vertex_max + 1e-10},
                           {"measured", grid},
                           {"limit", vertex_max + 1e-10}});
    }
    return records;
}

int cmd_gen(const GenConfig& config_in, const std::string& arch, const std::string& loss_kind,
            const std::string& out_dir) {
    if (out_dir.empty()) throw UsageError("gen needs --out DIR");
    GenConfig config = config_in;
    config.arch = architecture_from_string(arch);
    config.loss = loss_kind_from_string(loss_kind);
    if (config.loss == LossKind::custom) {
        throw UsageError("gen can sample zero_one or cross_entropy losses only");
    }
    const GenArtifacts artifacts = run_gen(config);
    write_gen(out_dir, artifacts, config);
    std::cout << "wrote dataset.csv, model.json, posterior.json, losses.lmat to " << out_dir
              << "\n"
              << "N=" << artifacts.dataset.n_data() << " J=" << artifacts.losses.n_samples()
              << " checkpoint=" << artifacts.dataset.checkpoint_size
              << " training_error=" << io::format_double(artifacts.meta.training_error) << "\n";
    return kExitOk;
}

int cmd_bound(const LossInput& loss_input, const HullInput& hull_input, Eigen::Index fw_iters,
              const std::string& model_path, const BoundConfig& bound_config,
              const std::string& out_dir) {
    const LossMatrix losses = load_losses(loss_input);
    const ProjectionSpace space = build_projection(losses);
    const ConvexHull hull = load_hull(hull_input, space.n_data());

    Eigen::Index m = fw_iters;
    if (m < 1) {
        if (model_path.empty()) {
            throw UsageError("pass --fw-iters M or --model PATH (m defaults to the "
                             "model's checkpoint size)");
        }
        io::TrainingMeta meta;
        (void)io::read_model_json(model_path, &meta);
        m = meta.checkpoint_size;
        if (m < 1) throw UsageError("model file carries no checkpoint size; pass --fw-iters");
    }

    const BoundOutcome outcome = run_bound(space, hull, m, bound_config);
    emit(io::report_to_json(outcome.report, outcome.solution, &outcome.checks), out_dir,
         "report.json");
    if (!out_dir.empty()) {
        std::cout << "bound_I=" << io::format_double(outcome.report.bound_I)
                  << " bound_II=" << io::format_double(outcome.report.bound_II)
                  << " eer=" << io::format_double(outcome.report.expected_risk_estimate)
                  << " coreset_size=" << outcome.report.coreset_size << "\n";
    }
    return kExitOk;
}

int cmd_verify(const LossInput& loss_input, const HullInput& hull_input,
               const std::string& report_path, const std::string& out_dir) {
    const LossMatrix losses = load_losses(loss_input);
    const ProjectionSpace space = build_projection(losses);
    const ConvexHull hull = load_hull(hull_input, space.n_data());

    std::ifstream in(report_path);
    if (!in) throw IoError("cannot open " + report_path);
    json stored;
    try {
        in >> stored;
    } catch (const json::parse_error& e) {
        throw FormatError("report JSON parse error at byte " + std::to_string(e.byte));
    }
    BoundConfig config;
    config.xi = stored.at("config").at("xi").get<double>();
    config.delta = stored.at("config").at("delta").get<double>();
    config.variant = rate_variant_from_string(stored.at("config").at("variant").get<std::string>());
    config.seed = stored.at("config").at("seed").get<std::uint64_t>();
    const Eigen::Index m = stored.at("config").at("m").get<Eigen::Index>();

    const BoundOutcome outcome = run_bound(space, hull, m, config);

    json doc;
    doc["checks"] = json::parse(io::verification_to_json(outcome.checks));
    doc["oracle"] = oracle_records(space, hull, losses, outcome.solution);

    // The stored report must reproduce bit-for-bit under its own config.
    const double drift =
        std::max(std::abs(outcome.report.bound_I - stored.at("bound_I").get<double>()),
                 std::abs(outcome.report.bound_II - stored.at("bound_II").get<double>()));
    doc["oracle"].push_back({{"name", "report_reproduces"},
                             {"passed", drift <= 1e-12},
                             {"measured", drift},
                             {"limit", 1e-12}});

    bool all = outcome.checks.all_passed();
    for (const auto& record : doc["oracle"]) {
        all = all && record.at("passed").get<bool>();
    }
    doc["all_passed"] = all;
    emit(doc.dump(2) + "\n", out_dir, "verify.json");
    return all ? kExitOk : kExitComputation;
}

int cmd_sweep(const GenConfig& config_in, const std::string& arch, const std::string& loss_kind,
              const std::vector<Eigen::Index>& checkpoints, Eigen::Index fw_iters,
              const BoundConfig& bound_config, const std::string& out_dir) {
    if (checkpoints.empty()) throw UsageError("sweep needs --checkpoints");
    GenConfig config = config_in;
    config.arch = architecture_from_string(arch);
    config.loss = loss_kind_from_string(loss_kind);
    const std::vector<SweepRow> rows = run_sweep(config, checkpoints, bound_config, fw_iters);
    emit(sweep_to_csv(rows), out_dir, "sweep.csv");
    return kExitOk;
}

int cmd_report(const std::string& report_path) {
    std::ifstream in(report_path);
    if (!in) throw IoError("cannot open " + report_path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw FormatError("report JSON parse error at byte " + std::to_string(e.byte));
    }
    const auto& config = doc.at("config");
    std::cout << "coreset bound report\n"
              << "  N=" << config.at("N").get<Eigen::Index>()
              << " J=" << config.at("J").get<Eigen::Index>()
              << " m=" << config.at("m").get<Eigen::Index>()
              << " xi=" << config.at("xi").get<double>()
              << " delta=" << config.at("delta").get<double>()
              << " variant=" << config.at("variant").get<std::string>()
              << " seed=" << config.at("seed").get<std::uint64_t>() << "\n"
              << "  bound_I               = " << doc.at("bound_I").get<double>() << "\n"
              << "  bound_II (eq20)       = " << doc.at("bound_II_eq20").get<double>() << "\n"
              << "  bound_II (eq21)       = " << doc.at("bound_II_eq21").get<double>() << "\n"
              << "  total                 = "
              << doc.at("bound_I").get<double>() + doc.at("bound_II").get<double>() << "\n"
              << "  expected risk (EER)   = " << doc.at("expected_risk_estimate").get<double>()
              << "\n"
              << "  theorem1 rate         = " << doc.at("theorem1_rate").get<double>() << "\n"
              << "  coreset size          = " << doc.at("coreset_size").get<Eigen::Index>()
              << "\n";
    const auto& constants = doc.at("constants");
    std::cout << "  sigma_hat=" << constants.at("sigma_hat").get<double>()
              << " eta_hat=" << constants.at("eta_hat").get<double>()
              << " eta_bar=" << constants.at("eta_bar").get<double>()
              << " beta_hat=" << constants.at("beta_hat").get<double>() << "\n";
    if (doc.contains("checks")) {
        std::cout << "  checks all_passed     = "
                  << (doc.at("checks").at("all_passed").get<bool>() ? "yes" : "no") << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frank-Wolfe Hilbert coreset construction and risk bounds"};
    app.require_subcommand(1);

    // gen
    GenConfig gen_config;
    std::string gen_arch = "logistic";
    std::string gen_loss = "zero_one";
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "generate dataset, model, posterior, loss matrix");
    add_gen_options(gen, gen_config, gen_arch, gen_loss);
    gen->add_option("--out", gen_out, "output directory")->required();

    // shared bound/verify inputs
    LossInput loss_input;
    HullInput hull_input;
    BoundConfig bound_config;
    std::string variant_name = "appendix";
    Eigen::Index fw_iters = 0;
    std::string model_path;
    std::string bound_out;

    auto* bound = app.add_subcommand("bound", "construct coreset and evaluate bounds");
    bound->add_option("--lmat", loss_input.path, "loss matrix path")->required();
    bound->add_option("--format", loss_input.format, "lmat|csv");
    bound->add_option("--loss", loss_input.loss_kind, "loss kind for csv input");
    bound->add_option("--hull", hull_input.path, "hull JSON path");
    bound->add_flag("--uniform", hull_input.uniform, "use the uniform K=1 hull");
    bound->add_option("--fw-iters", fw_iters, "Frank-Wolfe iterations m");
    bound->add_option("--model", model_path, "model JSON (m defaults to its checkpoint)");
    bound->add_option("--xi", bound_config.xi, "sub-Gaussian parameter");
    bound->add_option("--delta", bound_config.delta, "confidence parameter");
    bound->add_option("--variant", variant_name, "appendix|theorem");
    bound->add_option("--seed", bound_config.seed, "seed echoed into the report");
    bound->add_option("--out", bound_out, "directory for report.json (default: stdout)");

    std::string verify_report;
    std::string verify_out;
    auto* verify = app.add_subcommand("verify", "re-run brute-force oracles against a report");
    verify->add_option("--lmat", loss_input.path, "loss matrix path")->required();
    verify->add_option("--format", loss_input.format, "lmat|csv");
    verify->add_option("--loss", loss_input.loss_kind, "loss kind for csv input");
    verify->add_option("--hull", hull_input.path, "hull JSON path");
    verify->add_flag("--uniform", hull_input.uniform, "use the uniform K=1 hull");
    verify->add_option("--report", verify_report, "report.json to check")->required();
    verify->add_option("--out", verify_out, "directory for verify.json (default: stdout)");

    GenConfig sweep_config;
    std::string sweep_arch = "logistic";
    std::string sweep_loss = "zero_one";
    std::string sweep_out;
    std::vector<Eigen::Index> checkpoints;
    auto* sweep = app.add_subcommand("sweep", "bounds across nested training checkpoints");
    add_gen_options(sweep, sweep_config, sweep_arch, sweep_loss);
    sweep->add_option("--checkpoints", checkpoints, "checkpoint sizes")
        ->required()
        ->delimiter(',');
    sweep->add_option("--fw-iters", fw_iters, "override m (default: checkpoint size)");
    sweep->add_option("--xi", bound_config.xi, "sub-Gaussian parameter");
    sweep->add_option("--delta", bound_config.delta, "confidence parameter");
    sweep->add_option("--variant", variant_name, "appendix|theorem");
    sweep->add_option("--out", sweep_out, "directory for sweep.csv (default: stdout)");

    std::string report_path;
    auto* report = app.add_subcommand("report", "print a report.json in human form");
    report->add_option("--report", report_path, "report.json path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        bound_config.variant = rate_variant_from_string(variant_name);
        if (gen->parsed()) return cmd_gen(gen_config, gen_arch, gen_loss, gen_out);
        if (bound->parsed()) {
            return cmd_bound(loss_input, hull_input, fw_iters, model_path, bound_config,
                             bound_out);
        }
        if (verify->parsed()) return cmd_verify(loss_input, hull_input, verify_report, verify_out);
        if (sweep->parsed()) {
            return cmd_sweep(sweep_config, sweep_arch, sweep_loss, checkpoints, fw_iters,
                             bound_config, sweep_out);
        }
        if (report->parsed()) return cmd_report(report_path);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CoresetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitComputation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitComputation;
    }
    return kExitUsage;
}

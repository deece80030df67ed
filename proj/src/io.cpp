#include "coreset/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace coreset::io {

namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'L', 'M', 'A', 'T'};
constexpr std::uint32_t kVersion = 1;

void append_bytes(std::string& out, const void* data, std::size_t len) {
    out.append(static_cast<const char*>(data), len);
}

template <typename T>
T read_scalar(const std::string& bytes, std::size_t offset, const char* what) {
    if (offset + sizeof(T) > bytes.size()) {
        throw FormatError(std::string("LMAT truncated while reading ") + what + " at byte " +
                          std::to_string(offset));
    }
    T value;
    std::memcpy(&value, bytes.data() + offset, sizeof(T));
    return value;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return std::move(buffer).str();
}

void spill(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + path.string());
}

json constants_to_json(const BoundConstants& constants) {
    json out;
    out["sigma_i"] = std::vector<double>(constants.sigma_i.begin(), constants.sigma_i.end());
    out["eta_i"] = std::vector<double>(constants.eta_i.begin(), constants.eta_i.end());
    out["beta_i"] = std::vector<double>(constants.beta_i.begin(), constants.beta_i.end());
    out["radius_i"] = std::vector<double>(constants.radius_i.begin(), constants.radius_i.end());
    out["eta_bar"] = constants.eta_bar;
    out["sigma_hat"] = constants.sigma_hat;
    out["eta_hat"] = constants.eta_hat;
    out["beta_hat"] = constants.beta_hat;
    return out;
}

json checks_to_json(const VerificationResult& result) {
    json checks = json::array();
    for (const auto& check : result.checks) {
        checks.push_back({{"name", check.name},
                          {"passed", check.passed},
                          {"measured", check.measured},
                          {"limit", check.limit}});
    }
    return json{{"all_passed", result.all_passed()}, {"records", checks}};
}

} // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) throw IoError("failed to format a double");
    return std::string(buffer, ptr);
}

void write_lmat(const std::filesystem::path& path, const LossMatrix& losses) {
    losses.validate();
    std::string bytes;
    const std::uint64_t n = static_cast<std::uint64_t>(losses.n_data());
    const std::uint64_t j = static_cast<std::uint64_t>(losses.n_samples());
    bytes.reserve(25 + 8 * n * j);
    append_bytes(bytes, kMagic, 4);
    append_bytes(bytes, &kVersion, 4);
    append_bytes(bytes, &n, 8);
    append_bytes(bytes, &j, 8);
    const std::uint8_t kind = static_cast<std::uint8_t>(losses.kind);
    append_bytes(bytes, &kind, 1);
    for (std::uint64_t row = 0; row < n; ++row) {
        append_bytes(bytes, losses.values.row(static_cast<Eigen::Index>(row)).data(), 8 * j);
    }
    spill(path, bytes);
}

LossMatrix read_lmat(const std::filesystem::path& path) {
    const std::string bytes = slurp(path);
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw FormatError("bad LMAT magic at byte 0 in " + path.string());
    }
    const auto version = read_scalar<std::uint32_t>(bytes, 4, "version");
    if (version != kVersion) {
        throw FormatError("unsupported LMAT version " + std::to_string(version) +
                          " at byte 4");
    }
    const auto n = read_scalar<std::uint64_t>(bytes, 8, "N");
    const auto j = read_scalar<std::uint64_t>(bytes, 16, "J");
    const auto kind = read_scalar<std::uint8_t>(bytes, 24, "loss kind");
    if (kind > 2) {
        throw FormatError("unknown loss kind " + std::to_string(kind) + " at byte 24");
    }
    if (n == 0 || j == 0 || n > (1u << 26) || j > (1u << 26)) {
        throw FormatError("implausible LMAT dimensions at byte 8: N=" + std::to_string(n) +
                          " J=" + std::to_string(j));
    }
    const std::size_t expected = 25 + 8 * static_cast<std::size_t>(n) * j;
    if (bytes.size() != expected) {
        throw FormatError("LMAT payload size mismatch at byte " +
                          std::to_string(std::min(bytes.size(), expected)) + ": have " +
                          std::to_string(bytes.size()) + " bytes, expected " +
                          std::to_string(expected));
    }
    LossMatrix losses;
    losses.kind = static_cast<LossKind>(kind);
    losses.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(j));
    for (std::uint64_t row = 0; row < n; ++row) {
        std::memcpy(losses.values.row(static_cast<Eigen::Index>(row)).data(),
                    bytes.data() + 25 + 8 * row * j, 8 * j);
    }
    losses.validate();
    return losses;
}

LossMatrix read_loss_csv(const std::filesystem::path& path, LossKind kind) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw FormatError("unparseable value '" + cell + "' at line " +
                                  std::to_string(line_no) + " of " + path.string());
            }
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw FormatError("ragged CSV row at line " + std::to_string(line_no));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw FormatError("empty loss CSV " + path.string());
    LossMatrix losses;
    losses.kind = kind;
    losses.values.resize(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            losses.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                rows[r][c];
        }
    }
    losses.validate();
    return losses;
}

void write_hull_json(const std::filesystem::path& path, const ConvexHull& hull) {
    json doc;
    doc["n_data"] = hull.n_data();
    json vertices = json::array();
    for (const auto& vertex : hull.vertices) {
        vertices.push_back(std::vector<double>(vertex.p.begin(), vertex.p.end()));
    }
    doc["vertices"] = std::move(vertices);
    spill(path, doc.dump(2) + "\n");
}

ConvexHull read_hull_json(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(slurp(path));
    } catch (const json::parse_error& e) {
        throw FormatError("hull JSON parse error at byte " + std::to_string(e.byte) + ": " +
                          e.what());
    }
    if (!doc.contains("n_data") || !doc.contains("vertices")) {
        throw FormatError("hull JSON needs 'n_data' and 'vertices'");
    }
    const auto n = doc["n_data"].get<Eigen::Index>();
    std::vector<ProbabilityVector> vertices;
    for (const auto& row : doc["vertices"]) {
        const auto values = row.get<std::vector<double>>();
        if (static_cast<Eigen::Index>(values.size()) != n) {
            throw FormatError("hull vertex length does not match n_data");
        }
        vertices.push_back(ProbabilityVector::validated(
            Eigen::Map<const Eigen::VectorXd>(values.data(),
                                              static_cast<Eigen::Index>(values.size()))));
    }
    return ConvexHull::validated(std::move(vertices));
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& dataset) {
    std::string out;
    for (Eigen::Index i = 0; i < dataset.n_data(); ++i) {
        for (Eigen::Index c = 0; c < dataset.dim(); ++c) {
            out += format_double(dataset.inputs(i, c));
            out += ',';
        }
        out += std::to_string(dataset.labels[i]);
        out += '\n';
    }
    spill(path, out);
}

Dataset read_dataset_csv(const std::filesystem::path& path, Eigen::Index checkpoint_size) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw FormatError("unparseable value '" + cell + "' at line " +
                                  std::to_string(line_no) + " of " + path.string());
            }
        }
        if (row.size() < 2) throw FormatError("dataset row needs features plus a label");
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw FormatError("ragged dataset row at line " + std::to_string(line_no));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw FormatError("empty dataset CSV " + path.string());
    Dataset ds;
    const Eigen::Index dim = static_cast<Eigen::Index>(rows.front().size()) - 1;
    ds.inputs.resize(static_cast<Eigen::Index>(rows.size()), dim);
    ds.labels.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            ds.inputs(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
        }
        const double label = rows[r].back();
        // Accept {0,1} and map to {-1,+1}.
        if (label == 0.0) {
            ds.labels[static_cast<Eigen::Index>(r)] = -1;
        } else if (label == -1.0 || label == 1.0) {
            ds.labels[static_cast<Eigen::Index>(r)] = static_cast<int>(label);
        } else {
            throw FormatError("label " + format_double(label) + " at line " +
                              std::to_string(r + 1) + " is not binary");
        }
    }
    ds.checkpoint_size = checkpoint_size > 0 ? checkpoint_size : ds.n_data();
    ds.validate();
    return ds;
}

void write_model_json(const std::filesystem::path& path, const ReferenceModel& model,
                      std::uint64_t seed, const TrainingMeta& meta) {
    json doc;
    doc["architecture"] = to_string(model.arch);
    doc["dims"] = {{"input", model.input_dim}, {"hidden", model.hidden_width}};
    doc["theta"] = std::vector<double>(model.theta.begin(), model.theta.end());
    doc["seed"] = seed;
    doc["training_meta"] = {{"epochs", meta.epochs},
                            {"learning_rate", meta.learning_rate},
                            {"checkpoint_size", meta.checkpoint_size},
                            {"final_cross_entropy", meta.final_cross_entropy},
                            {"training_error", meta.training_error}};
    spill(path, doc.dump(2) + "\n");
}

ReferenceModel read_model_json(const std::filesystem::path& path, TrainingMeta* meta) {
    json doc;
    try {
        doc = json::parse(slurp(path));
    } catch (const json::parse_error& e) {
        throw FormatError("model JSON parse error at byte " + std::to_string(e.byte) + ": " +
                          e.what());
    }
    ReferenceModel model;
    model.arch = architecture_from_string(doc.at("architecture").get<std::string>());
    model.input_dim = doc.at("dims").at("input").get<Eigen::Index>();
    model.hidden_width = doc.at("dims").at("hidden").get<Eigen::Index>();
    const auto theta = doc.at("theta").get<std::vector<double>>();
    model.theta = Eigen::Map<const Eigen::VectorXd>(theta.data(),
                                                    static_cast<Eigen::Index>(theta.size()));
    const Eigen::Index expected =
        ReferenceModel::param_count(model.arch, model.input_dim, model.hidden_width);
    if (model.theta.size() != expected) {
        throw FormatError("model theta has " + std::to_string(model.theta.size()) +
                          " entries, expected " + std::to_string(expected));
    }
    if (meta && doc.contains("training_meta")) {
        const auto& tm = doc["training_meta"];
        meta->epochs = tm.value("epochs", Eigen::Index{0});
        meta->learning_rate = tm.value("learning_rate", 0.0);
        meta->checkpoint_size = tm.value("checkpoint_size", Eigen::Index{0});
        meta->final_cross_entropy = tm.value("final_cross_entropy", 0.0);
        meta->training_error = tm.value("training_error", 0.0);
    }
    return model;
}

void write_posterior_json(const std::filesystem::path& path, const PosteriorSpec& posterior) {
    json doc;
    doc["mean"] = std::vector<double>(posterior.mean.begin(), posterior.mean.end());
    doc["std"] = std::vector<double>(posterior.std_dev.begin(), posterior.std_dev.end());
    doc["prior_std"] = posterior.prior_std;
    spill(path, doc.dump(2) + "\n");
}

PosteriorSpec read_posterior_json(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(slurp(path));
    } catch (const json::parse_error& e) {
        throw FormatError("posterior JSON parse error at byte " + std::to_string(e.byte) +
                          ": " + e.what());
    }
    PosteriorSpec spec;
    const auto mean = doc.at("mean").get<std::vector<double>>();
    const auto std_dev = doc.at("std").get<std::vector<double>>();
    if (mean.size() != std_dev.size()) {
        throw FormatError("posterior mean/std lengths differ");
    }
    spec.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(),
                                                  static_cast<Eigen::Index>(mean.size()));
    spec.std_dev = Eigen::Map<const Eigen::VectorXd>(
        std_dev.data(), static_cast<Eigen::Index>(std_dev.size()));
    spec.prior_std = doc.at("prior_std").get<double>();
    return spec;
}

std::string report_to_json(const BoundReport& report, const CoresetSolution& solution,
                           const VerificationResult* checks) {
    json doc;
    doc["constants"] = constants_to_json(report.constants);
    doc["theorem1_rate"] = report.theorem1_rate_value;
    doc["epsilon_proj"] = report.epsilon_proj;
    doc["bound_I"] = report.bound_I;
    doc["bound_II"] = report.bound_II;
    doc["bound_II_eq20"] = report.bound_II_eq20;
    doc["bound_II_eq21"] = report.bound_II_eq21;
    doc["expected_risk_estimate"] = report.expected_risk_estimate;
    doc["coreset_size"] = report.coreset_size;

    json coreset = json::array();
    for (std::size_t k = 0; k < solution.weights.indices.size(); ++k) {
        coreset.push_back(
            {{"index", solution.weights.indices[k]}, {"weight", solution.weights.weights[k]}});
    }
    doc["coreset"] = std::move(coreset);
    doc["selected_vertex"] = solution.vertex_index;

    doc["config"] = {{"m", report.m},
                     {"J", report.n_samples},
                     {"N", report.n_data},
                     {"xi", report.config.xi},
                     {"delta", report.config.delta},
                     {"variant", to_string(report.config.variant)},
                     {"seed", report.config.seed}};

    doc["trace"] = {{"objective", solution.objective_trace},
                    {"selected_indices", solution.selected_indices},
                    {"step_sizes", solution.step_sizes},
                    {"per_vertex_objective", solution.final_objectives},
                    {"converged", solution.converged}};
    if (checks) doc["checks"] = checks_to_json(*checks);
    return doc.dump(2) + "\n";
}

void write_report_json(const std::filesystem::path& path, const BoundReport& report,
                       const CoresetSolution& solution, const VerificationResult* checks) {
    spill(path, report_to_json(report, solution, checks));
}

std::string verification_to_json(const VerificationResult& result) {
    return checks_to_json(result).dump(2) + "\n";
}

} // namespace coreset::io

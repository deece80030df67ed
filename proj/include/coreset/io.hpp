#pragma once

#include "coreset/bounds.hpp"
#include "coreset/posterior.hpp"

#include <filesystem>
#include <string>

namespace coreset::io {

/// LMAT binary format: magic "LMAT", u32 LE version (=1), u64 LE N, u64 LE J,
/// u8 loss kind (0 zero_one, 1 cross_entropy, 2 custom), then N*J float64 LE
/// row-major.
void write_lmat(const std::filesystem::path& path, const LossMatrix& losses);
/// Throws FormatError naming the byte offset on malformed input.
LossMatrix read_lmat(const std::filesystem::path& path);

/// One datum per row, comma-separated loss values.
LossMatrix read_loss_csv(const std::filesystem::path& path, LossKind kind);

/// Hull file: {"n_data": N, "vertices": [[p_1..p_N], ...]}.
void write_hull_json(const std::filesystem::path& path, const ConvexHull& hull);
ConvexHull read_hull_json(const std::filesystem::path& path);

/// Dataset CSV: feature columns then the label in the last column.
void write_dataset_csv(const std::filesystem::path& path, const Dataset& dataset);
Dataset read_dataset_csv(const std::filesystem::path& path, Eigen::Index checkpoint_size = 0);

struct TrainingMeta {
    Eigen::Index epochs = 0;
    double learning_rate = 0.0;
    Eigen::Index checkpoint_size = 0;
    double final_cross_entropy = 0.0;
    double training_error = 0.0;
};

void write_model_json(const std::filesystem::path& path, const ReferenceModel& model,
                      std::uint64_t seed, const TrainingMeta& meta);
ReferenceModel read_model_json(const std::filesystem::path& path, TrainingMeta* meta = nullptr);

void write_posterior_json(const std::filesystem::path& path, const PosteriorSpec& posterior);
PosteriorSpec read_posterior_json(const std::filesystem::path& path);

std::string report_to_json(const BoundReport& report, const CoresetSolution& solution,
                           const VerificationResult* checks = nullptr);
void write_report_json(const std::filesystem::path& path, const BoundReport& report,
                       const CoresetSolution& solution,
                       const VerificationResult* checks = nullptr);

std::string verification_to_json(const VerificationResult& result);

/// Deterministic shortest-round-trip rendering; used by every CSV writer.
std::string format_double(double value);

} // namespace coreset::io

#include "coreset/posterior.hpp"

#include "coreset/parallel.hpp"
#include "coreset/rng.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace coreset {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) {
    return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

double zero_one(double logit, int label) {
    const int predicted = logit >= 0.0 ? 1 : -1;
    return predicted == label ? 0.0 : 1.0;
}

} // namespace

void Dataset::validate() const {
    if (n_data() < 1) throw ValidationError("dataset is empty");
    if (labels.size() != n_data()) {
        throw DimensionError("dataset has " + std::to_string(n_data()) + " rows but " +
                             std::to_string(labels.size()) + " labels");
    }
    for (Eigen::Index i = 0; i < n_data(); ++i) {
        if (labels[i] != -1 && labels[i] != 1) {
            throw ValidationError("label at row " + std::to_string(i) +
                                  " is not in {-1,+1}: " + std::to_string(labels[i]));
        }
    }
    if (checkpoint_size < 0 || checkpoint_size > n_data()) {
        throw ValidationError("checkpoint size " + std::to_string(checkpoint_size) +
                              " out of range");
    }
    if (!inputs.allFinite()) throw ValidationError("dataset inputs contain non-finite values");
}

Dataset make_blobs(Eigen::Index n, Eigen::Index dim, double separation, std::uint64_t seed) {
    if (n < 2 || dim < 1) throw ConfigError("make_blobs needs n >= 2 and dim >= 1");
    Rng rng(seed);
    Dataset ds;
    ds.inputs.resize(n, dim);
    ds.labels.resize(n);
    const double offset = separation / 2.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const int label = (i % 2 == 0) ? 1 : -1;
        ds.labels[i] = label;
        for (Eigen::Index c = 0; c < dim; ++c) ds.inputs(i, c) = rng.normal();
        ds.inputs(i, 0) += label > 0 ? offset : -offset;
    }
    // Seeded Fisher-Yates so any prefix is a random, roughly balanced subset.
    for (Eigen::Index i = n - 1; i > 0; --i) {
        const Eigen::Index j =
            static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(i) + 1));
        ds.inputs.row(i).swap(ds.inputs.row(j));
        std::swap(ds.labels[i], ds.labels[j]);
    }
    ds.checkpoint_size = n;
    return ds;
}

std::string to_string(Architecture arch) {
    return arch == Architecture::logistic ? "logistic" : "mlp_1hidden";
}

Architecture architecture_from_string(const std::string& name) {
    if (name == "logistic") return Architecture::logistic;
    if (name == "mlp_1hidden" || name == "mlp") return Architecture::mlp_1hidden;
    throw ConfigError("unknown architecture '" + name + "' (use logistic|mlp_1hidden)");
}

Eigen::Index ReferenceModel::param_count(Architecture arch, Eigen::Index input_dim,
                                         Eigen::Index hidden_width) {
    if (arch == Architecture::logistic) return input_dim + 1;
    return hidden_width * input_dim + hidden_width + hidden_width + 1;
}

ReferenceModel ReferenceModel::initialized(Architecture arch, Eigen::Index input_dim,
                                           Eigen::Index hidden_width, std::uint64_t seed) {
    if (input_dim < 1) throw ConfigError("model needs input_dim >= 1");
    if (arch == Architecture::mlp_1hidden && (hidden_width < 1 || hidden_width > 32)) {
        throw ConfigError("mlp_1hidden width must lie in [1, 32]");
    }
    ReferenceModel model;
    model.arch = arch;
    model.input_dim = input_dim;
    model.hidden_width = arch == Architecture::logistic ? 0 : hidden_width;
    model.theta.resize(param_count(arch, input_dim, model.hidden_width));
    Rng rng(seed);
    for (Eigen::Index j = 0; j < model.theta.size(); ++j) model.theta[j] = 0.1 * rng.normal();
    return model;
}

double ReferenceModel::raw_output_at(const Eigen::VectorXd& params,
                                     const Eigen::VectorXd& x) const {
    if (arch == Architecture::logistic) {
        return params.head(input_dim).dot(x) + params[input_dim];
    }
    const Eigen::Index h = hidden_width;
    const Eigen::Index d = input_dim;
    double logit = params[h * d + h + h]; // output bias
    for (Eigen::Index k = 0; k < h; ++k) {
        const double pre = params.segment(k * d, d).dot(x) + params[h * d + k];
        logit += params[h * d + h + k] * std::tanh(pre);
    }
    return logit;
}

double ReferenceModel::raw_output(const Eigen::VectorXd& x) const {
    return raw_output_at(theta, x);
}

double cross_entropy_loss(const ReferenceModel& model, const Dataset& dataset,
                          Eigen::Index subset_size) {
    if (subset_size < 1 || subset_size > dataset.n_data()) {
        throw ValidationError("cross_entropy_loss: bad subset size");
    }
    double total = 0.0;
    for (Eigen::Index i = 0; i < subset_size; ++i) {
        const double logit = model.raw_output(dataset.inputs.row(i).transpose());
        total += softplus(-static_cast<double>(dataset.labels[i]) * logit);
    }
    return total / static_cast<double>(subset_size);
}

Eigen::VectorXd cross_entropy_gradient_at(const ReferenceModel& model,
                                          const Eigen::VectorXd& params,
                                          const Dataset& dataset, Eigen::Index subset_size) {
    if (subset_size < 1 || subset_size > dataset.n_data()) {
        throw ValidationError("cross_entropy_gradient: bad subset size");
    }
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(params.size());
    const Eigen::Index d = model.input_dim;
    const Eigen::Index h = model.hidden_width;
    for (Eigen::Index i = 0; i < subset_size; ++i) {
        const Eigen::VectorXd x = dataset.inputs.row(i).transpose();
        const double y = static_cast<double>(dataset.labels[i]);
        if (model.arch == Architecture::logistic) {
            const double logit = params.head(d).dot(x) + params[d];
            const double dphi = -y * sigmoid(-y * logit); // d loss / d logit
            grad.head(d) += dphi * x;
            grad[d] += dphi;
        } else {
            Eigen::VectorXd hidden(h);
            for (Eigen::Index k = 0; k < h; ++k) {
                hidden[k] = std::tanh(params.segment(k * d, d).dot(x) + params[h * d + k]);
            }
            const double logit =
                params.segment(h * d + h, h).dot(hidden) + params[h * d + h + h];
            const double dphi = -y * sigmoid(-y * logit);
            for (Eigen::Index k = 0; k < h; ++k) {
                const double w2 = params[h * d + h + k];
                const double gate = dphi * w2 * (1.0 - hidden[k] * hidden[k]);
                grad.segment(k * d, d) += gate * x;
                grad[h * d + k] += gate;
                grad[h * d + h + k] += dphi * hidden[k];
            }
            grad[h * d + h + h] += dphi;
        }
    }
    return grad / static_cast<double>(subset_size);
}

Eigen::VectorXd cross_entropy_gradient(const ReferenceModel& model, const Dataset& dataset,
                                       Eigen::Index subset_size) {
    return cross_entropy_gradient_at(model, model.theta, dataset, subset_size);
}

ReferenceModel train_reference(const Dataset& dataset, Architecture arch,
                               Eigen::Index hidden_width, const TrainOptions& options) {
    dataset.validate();
    const Eigen::Index subset = dataset.checkpoint_size > 0 ? dataset.checkpoint_size
                                                            : dataset.n_data();
    ReferenceModel model =
        ReferenceModel::initialized(arch, dataset.dim(), hidden_width, options.seed);
    for (Eigen::Index epoch = 0; epoch < options.epochs; ++epoch) {
        const Eigen::VectorXd grad = cross_entropy_gradient(model, dataset, subset);
        model.theta -= options.learning_rate * grad;
        if (!model.theta.allFinite()) {
            throw DivergenceError("training diverged at epoch " + std::to_string(epoch));
        }
    }
    const double final_loss = cross_entropy_loss(model, dataset, subset);
    if (!std::isfinite(final_loss)) {
        throw DivergenceError("training loss non-finite after epoch " +
                              std::to_string(options.epochs));
    }
    return model;
}

Eigen::VectorXd diagonal_hessian(const ReferenceModel& model, const Dataset& dataset,
                                 Eigen::Index subset_size) {
    const Eigen::Index p = model.n_params();
    Eigen::VectorXd diag(p);
    parallel_for(p, [&](std::int64_t j) {
        const double h = 1e-3 * (1.0 + std::abs(model.theta[j]));
        Eigen::VectorXd shifted = model.theta;
        shifted[j] = model.theta[j] + h;
        const double forward =
            cross_entropy_gradient_at(model, shifted, dataset, subset_size)[j];
        shifted[j] = model.theta[j] - h;
        const double backward =
            cross_entropy_gradient_at(model, shifted, dataset, subset_size)[j];
        diag[j] = (forward - backward) / (2.0 * h);
        if (!std::isfinite(diag[j])) {
            throw NumericalError("diagonal Hessian is non-finite at coordinate " +
                                 std::to_string(j));
        }
    });
    return diag;
}

PosteriorSpec build_posterior(const Eigen::VectorXd& theta, const Eigen::VectorXd& hessian_diag,
                              double prior_std) {
    if (!(prior_std > 0.0)) throw ConfigError("prior_std must be positive");
    if (theta.size() != hessian_diag.size()) {
        throw DimensionError("theta and Hessian diagonal lengths differ");
    }
    PosteriorSpec spec;
    spec.mean = theta;
    spec.prior_std = prior_std;
    spec.std_dev.resize(theta.size());
    for (Eigen::Index j = 0; j < theta.size(); ++j) {
        double sd = prior_std;
        if (hessian_diag[j] > 0.0) {
            sd = std::min(prior_std, 1.0 / std::sqrt(hessian_diag[j]));
        }
        spec.std_dev[j] = std::max(sd, 1e-300);
    }
    return spec;
}

LossMatrix sample_losses(const ReferenceModel& model, const PosteriorSpec& posterior,
                         const Dataset& dataset, Eigen::Index n_samples, std::uint64_t seed,
                         LossKind kind) {
    if (n_samples < 1) throw ConfigError("sample_losses needs J >= 1");
    if (kind == LossKind::custom) {
        throw ConfigError("sample_losses supports zero_one and cross_entropy only");
    }
    if (posterior.mean.size() != model.n_params()) {
        throw DimensionError("posterior dimension does not match the model");
    }
    dataset.validate();

    // One sequential stream of draws; evaluation parallelizes over columns.
    Eigen::MatrixXd draws(model.n_params(), n_samples);
    Rng rng(seed);
    for (Eigen::Index j = 0; j < n_samples; ++j) {
        for (Eigen::Index c = 0; c < model.n_params(); ++c) {
            draws(c, j) = posterior.mean[c] + posterior.std_dev[c] * rng.normal();
        }
    }

    LossMatrix losses;
    losses.kind = kind;
    losses.values.resize(dataset.n_data(), n_samples);
    parallel_for(n_samples, [&](std::int64_t j) {
        const Eigen::VectorXd params = draws.col(j);
        for (Eigen::Index n = 0; n < dataset.n_data(); ++n) {
            const double logit = model.raw_output_at(params, dataset.inputs.row(n).transpose());
            const double y = static_cast<double>(dataset.labels[n]);
            losses.values(n, j) = kind == LossKind::cross_entropy
                                      ? softplus(-y * logit)
                                      : zero_one(logit, dataset.labels[n]);
        }
    });
    return losses;
}

Eigen::VectorXd deterministic_losses(const ReferenceModel& model, const Dataset& dataset,
                                     LossKind kind) {
    Eigen::VectorXd out(dataset.n_data());
    for (Eigen::Index n = 0; n < dataset.n_data(); ++n) {
        const double logit = model.raw_output(dataset.inputs.row(n).transpose());
        const double y = static_cast<double>(dataset.labels[n]);
        out[n] = kind == LossKind::cross_entropy ? softplus(-y * logit)
                                                 : zero_one(logit, dataset.labels[n]);
    }
    return out;
}

} // namespace coreset

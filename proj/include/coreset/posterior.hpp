#pragma once

#include "coreset/geometry.hpp"

#include <cstdint>
#include <string>

namespace coreset {

/// Labeled inputs; labels live in {-1, +1}. The first checkpoint_size rows
/// form the training checkpoint (rows are pre-shuffled at generation, so
/// growing prefixes give nested random subsets).
struct Dataset {
    Eigen::MatrixXd inputs;  // N x d
    Eigen::VectorXi labels;  // {-1, +1}
    Eigen::Index checkpoint_size = 0;

    Eigen::Index n_data() const { return inputs.rows(); }
    Eigen::Index dim() const { return inputs.cols(); }
    void validate() const;
};

/// Two isotropic Gaussian blobs at +/- (separation/2) along the first axis,
/// balanced labels, seeded shuffle.
Dataset make_blobs(Eigen::Index n, Eigen::Index dim, double separation, std::uint64_t seed);

enum class Architecture { logistic, mlp_1hidden };

std::string to_string(Architecture arch);
Architecture architecture_from_string(const std::string& name);

/// Binary classifier with a flat parameter vector: either plain logistic
/// regression or one tanh hidden layer feeding a single logit.
struct ReferenceModel {
    Architecture arch = Architecture::logistic;
    Eigen::Index input_dim = 0;
    Eigen::Index hidden_width = 0; // 0 for logistic
    Eigen::VectorXd theta;

    Eigen::Index n_params() const { return theta.size(); }
    /// Raw logit phi(theta, x).
    double raw_output(const Eigen::VectorXd& x) const;
    double raw_output_at(const Eigen::VectorXd& params, const Eigen::VectorXd& x) const;

    static Eigen::Index param_count(Architecture arch, Eigen::Index input_dim,
                                    Eigen::Index hidden_width);
    static ReferenceModel initialized(Architecture arch, Eigen::Index input_dim,
                                      Eigen::Index hidden_width, std::uint64_t seed);
};

struct TrainOptions {
    Eigen::Index epochs = 200;
    double learning_rate = 0.5;
    std::uint64_t seed = 0;
};

/// Full-batch gradient descent on mean cross-entropy over the checkpoint
/// prefix. Deterministic given the seed. Throws DivergenceError (naming the
/// epoch) if the loss goes non-finite.
ReferenceModel train_reference(const Dataset& dataset, Architecture arch,
                               Eigen::Index hidden_width, const TrainOptions& options);

/// Mean cross-entropy and its analytic gradient over the first subset_size
/// rows.
double cross_entropy_loss(const ReferenceModel& model, const Dataset& dataset,
                          Eigen::Index subset_size);
Eigen::VectorXd cross_entropy_gradient(const ReferenceModel& model, const Dataset& dataset,
                                       Eigen::Index subset_size);
Eigen::VectorXd cross_entropy_gradient_at(const ReferenceModel& model,
                                          const Eigen::VectorXd& params,
                                          const Dataset& dataset, Eigen::Index subset_size);

/// Per-coordinate second derivative of the mean cross-entropy at theta,
/// via central differences on the analytic gradient with step
/// h_j = 1e-3 (1 + |theta_j|). Throws NumericalError naming the coordinate
/// on a non-finite result.
Eigen::VectorXd diagonal_hessian(const ReferenceModel& model, const Dataset& dataset,
                                 Eigen::Index subset_size);

/// Diagonal Gaussian posterior N(theta, diag(std^2)).
struct PosteriorSpec {
    Eigen::VectorXd mean;
    Eigen::VectorXd std_dev;
    double prior_std = 0.0;
};

/// sigma_j^{-2} = max(H_jj, prior_std^{-2}): the Hessian narrows a
/// coordinate only when it is sharper than the prior. Non-positive H_jj
/// falls back to the prior.
PosteriorSpec build_posterior(const Eigen::VectorXd& theta, const Eigen::VectorXd& hessian_diag,
                              double prior_std);

/// Draws J parameter samples from the posterior (one seeded stream, drawn
/// sequentially) and fills the N x J loss matrix; sample j is shared by
/// every datum.
LossMatrix sample_losses(const ReferenceModel& model, const PosteriorSpec& posterior,
                         const Dataset& dataset, Eigen::Index n_samples, std::uint64_t seed,
                         LossKind kind);

/// Loss of the deterministic model itself, per datum.
Eigen::VectorXd deterministic_losses(const ReferenceModel& model, const Dataset& dataset,
                                     LossKind kind);

} // namespace coreset

#pragma once

#include "bergm/model.hpp"
#include "bergm/sampler.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace bergm {

enum class FitMethod { mple, mcmle, exact };

std::string_view to_string(FitMethod method);
FitMethod fit_method_from_string(std::string_view text);

/// How FitResult::log_likelihood was obtained.
enum class LikelihoodKind {
    exact,   ///< closed form (dyad-independent model) or full enumeration
    pseudo,  ///< log pseudolikelihood; only an approximation for dyad-dependent terms
    bridge,  ///< bridge sampling from the zero-coefficient model
};

std::string_view to_string(LikelihoodKind kind);

struct Convergence {
    bool converged = false;
    std::size_t iterations = 0;
    /// Newton gradient norm for MPLE and exact fits; for MC-MLE the largest
    /// |observed - simulated mean| in simulated-sd units at the last iteration.
    double gradient_norm = 0.0;
    /// MC-MLE iterates, starting with the initial value.
    std::vector<Eigen::VectorXd> trajectory;
};

struct FitResult {
    FitMethod method = FitMethod::mple;
    std::vector<std::string> names;
    Eigen::VectorXd theta;
    Eigen::VectorXd std_errors;
    Eigen::VectorXd z_values;
    Eigen::VectorXd p_values;
    double log_likelihood = 0.0;
    LikelihoodKind likelihood_kind = LikelihoodKind::exact;
    double aic = 0.0;
    double bic = 0.0;
    /// n * m of the fitted graph, used by BIC.
    std::size_t dyad_count = 0;
    Convergence convergence;

    std::size_t size() const noexcept { return static_cast<std::size_t>(theta.size()); }
};

struct InformationCriteria {
    double aic = 0.0;
    double bic = 0.0;
};

/// aic = -2 ll + 2 q, bic = -2 ll + q ln(dyads).
InformationCriteria information_criteria(double log_likelihood, std::size_t q, std::size_t dyads);
InformationCriteria information_criteria(const FitResult& fit, const BipartiteGraph& graph);

double two_sided_normal_p(double z);
/// "***" p < 0.001, "**" p < 0.01, "*" p < 0.05, "." p < 0.1, else "".
std::string significance_stars(double p);

/// Fills z, p, aic and bic from theta, std_errors and log_likelihood.
void finalize_fit(FitResult& fit);

struct MpleOptions {
    double gradient_tolerance = 1e-8;
    std::size_t max_iterations = 100;
};

/**
 * Maximum pseudolikelihood: logistic regression of dyad states on change
 * statistics. For dyad-independent models this is the exact MLE and the
 * reported log-likelihood is exact.
 *
 * Throws RankDeficiencyError for collinear terms and SeparationError when a
 * term perfectly predicts tie states.
 */
FitResult fit_mple(const ModelSpec& spec, const BipartiteGraph& graph, const AttributeTable& attrs,
                   const MpleOptions& options = {});

/// Log pseudolikelihood at theta; equals the log-likelihood for dyad-independent models.
double log_pseudolikelihood(const BoundModel& model, const BipartiteGraph& graph,
                            const Eigen::VectorXd& theta);

struct McmleOptions {
    SamplerConfig sampler;
    std::size_t max_iterations = 20;
    /// Converged when every |observed - simulated mean| <= tolerance simulated sd.
    double tolerance = 0.1;
    /// Smallest step toward the observed statistics tried before giving up.
    double min_step = 1.0 / 1024.0;
    std::size_t bridges = 20;
    /// Networks drawn at each bridge midpoint.
    std::size_t bridge_samples = 500;
    /// Add the MCMC error term to the inverse-Fisher variance.
    bool inflate_se = false;
    /// Compare the analytic Geyer-Thompson gradient with central differences
    /// at three random points per iteration; throws InternalConsistencyError
    /// on a relative mismatch above 1e-4.
    bool check_gradient = false;
    std::optional<Eigen::VectorXd> init;
};

/**
 * Monte-Carlo maximum likelihood by Geyer-Thompson importance sampling,
 * started from the MPLE unless `init` is given. Throws ConvergenceError after
 * max_iterations and NumericalError when the observed statistics stay outside
 * the sampled hull at the smallest step.
 */
FitResult fit_mcmle(const ModelSpec& spec, const BipartiteGraph& graph, const AttributeTable& attrs,
                    const McmleOptions& options = {});

/// Geyer-Thompson log-likelihood ratio l(theta0 + delta) - l(theta0) estimated
/// from statistics sampled at theta0, with its gradient.
struct GeyerThompson {
    GeyerThompson(const Eigen::MatrixXd& sampled, const Eigen::VectorXd& observed);

    double value(const Eigen::VectorXd& delta) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& delta) const;
    /// Importance-weighted covariance of the sampled statistics at delta.
    Eigen::MatrixXd covariance(const Eigen::VectorXd& delta) const;

    Eigen::MatrixXd centered;  ///< sampled rows minus observed
};

inline constexpr std::size_t exact_dyad_cap = 22;

/**
 * Distribution of the statistic vector over all 2^(n m) graphs, as distinct
 * vectors with multiplicities. Throws ValidationError above exact_dyad_cap dyads.
 */
class ExactDistribution {
public:
    explicit ExactDistribution(const BoundModel& model);

    const Eigen::MatrixXd& support() const noexcept { return support_; }
    const Eigen::VectorXd& counts() const noexcept { return counts_; }

    double log_normalizer(const Eigen::VectorXd& theta) const;
    Eigen::VectorXd mean(const Eigen::VectorXd& theta) const;
    Eigen::MatrixXd covariance(const Eigen::VectorXd& theta) const;

private:
    Eigen::VectorXd weights(const Eigen::VectorXd& theta, double& log_norm) const;

    Eigen::MatrixXd support_;
    Eigen::VectorXd counts_;
};

struct ExactOptions {
    double gradient_tolerance = 1e-10;
    std::size_t max_iterations = 200;
};

/**
 * Exact MLE by Newton on the enumerated likelihood. Throws
 * MleNonexistenceError when the observed statistics lie on the boundary of
 * the attainable set, RankDeficiencyError for collinear terms.
 */
FitResult fit_exact(const ModelSpec& spec, const BipartiteGraph& graph, const AttributeTable& attrs,
                    const ExactOptions& options = {});

} // namespace bergm

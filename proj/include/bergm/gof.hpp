#pragma once

#include "bergm/estimation.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace bergm {

struct GofRow {
    std::string name;
    double observed = 0.0;
    double sim_min = 0.0;
    double sim_mean = 0.0;
    double sim_max = 0.0;
    double p = 1.0;
};

/// Auxiliary comparison of the number of nodes with a given degree.
struct DegreeGofRow {
    Side side = Side::first;
    std::size_t degree = 0;
    double observed = 0.0;
    double sim_min = 0.0;
    double sim_mean = 0.0;
    double sim_max = 0.0;
    double p = 1.0;
};

struct GofReport {
    std::vector<GofRow> rows;
    double mahalanobis = 0.0;
    double mahalanobis_squared = 0.0;
    /// True when the simulated covariance was singular and a pseudo-inverse was used.
    bool pseudo_inverse = false;
    std::vector<std::string> warnings;
    std::size_t sample_count = 0;
    std::uint64_t seed = 0;
    std::vector<DegreeGofRow> degree_rows;
};

struct GofOptions {
    /// On a singular simulated covariance, use the pseudo-inverse and warn
    /// instead of throwing SingularCovarianceError.
    bool allow_pseudo_inverse = false;
    bool degree_distribution = false;
};

/// min(1, 2 min(#{sim <= obs}, #{sim >= obs}) / count).
double empirical_p(std::span<const double> simulated, double observed);

struct Mahalanobis {
    double distance = 0.0;
    double squared = 0.0;
    bool pseudo_inverse = false;
    /// Index of the statistic most responsible for singularity, when singular.
    std::optional<std::size_t> offending;
};

/**
 * sqrt((obs - mean)' S^-1 (obs - mean)) with S the sample covariance of the
 * rows of `simulated`. Singularity is judged on the correlation matrix.
 * Throws SingularCovarianceError when singular and `allow_pseudo_inverse` is false.
 */
Mahalanobis mahalanobis_distance(const Eigen::VectorXd& observed, const Eigen::MatrixXd& simulated,
                                 std::span<const std::string> names, bool allow_pseudo_inverse);

/// Report from already simulated statistics.
GofReport summarize_gof(std::span<const std::string> names, const Eigen::VectorXd& observed,
                        const Eigen::MatrixXd& simulated, const GofOptions& options = {});

/**
 * Simulates config.sample_count networks at fit.theta from the observed
 * graph and compares the model statistics with the observed ones.
 */
GofReport gof(const ModelSpec& spec, const BipartiteGraph& graph, const AttributeTable& attrs,
              const FitResult& fit, const SamplerConfig& config, const GofOptions& options = {});

} // namespace bergm

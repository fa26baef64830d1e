#include "bergm/gof.hpp"

#include "bergm/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace bergm {

double empirical_p(std::span<const double> simulated, double observed) {
    if (simulated.empty()) throw ValidationError("empirical p-value of an empty sample");
    std::size_t below = 0, above = 0;
    for (double s : simulated) {
        if (s <= observed) ++below;
        if (s >= observed) ++above;
    }
    const double tail = static_cast<double>(std::min(below, above));
    return std::min(1.0, 2.0 * tail / static_cast<double>(simulated.size()));
}

Mahalanobis mahalanobis_distance(const Eigen::VectorXd& observed, const Eigen::MatrixXd& simulated,
                                 std::span<const std::string> names, bool allow_pseudo_inverse) {
    const auto q = simulated.cols();
    if (simulated.rows() < 2) throw ValidationError("Mahalanobis distance needs at least 2 samples");
    const Eigen::VectorXd mean = simulated.colwise().mean().transpose();
    const Eigen::MatrixXd centered = simulated.rowwise() - mean.transpose();
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(simulated.rows() - 1);
    const Eigen::VectorXd diff = observed - mean;

    Mahalanobis out;
    // Work on the correlation scale so the singularity test is unit-free.
    Eigen::VectorXd scale(q);
    for (Eigen::Index j = 0; j < q; ++j) {
        const double var = cov(j, j);
        if (var <= 0.0 && !out.offending) out.offending = static_cast<std::size_t>(j);
        scale[j] = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;
    }
    const Eigen::MatrixXd corr = scale.asDiagonal() * cov * scale.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr);
    const Eigen::VectorXd values = eig.eigenvalues();
    constexpr double threshold = 1e-10;
    if (!out.offending && values.minCoeff() <= threshold) {
        Eigen::Index worst = 0;
        eig.eigenvectors().col(0).cwiseAbs().maxCoeff(&worst);
        out.offending = static_cast<std::size_t>(worst);
    }

    if (out.offending) {
        const std::string& name = names[*out.offending];
        if (!allow_pseudo_inverse) {
            throw SingularCovarianceError("simulated covariance is singular; statistic '" + name +
                                              "' is constant or collinear with others",
                                          name);
        }
        out.pseudo_inverse = true;
    }

    // (D^-1/2 diff)' pinv(corr) (D^-1/2 diff); with zero-variance statistics
    // dropped this is the Moore-Penrose form on the remaining coordinates.
    const Eigen::VectorXd z = scale.asDiagonal() * diff;
    const Eigen::VectorXd projected = eig.eigenvectors().transpose() * z;
    double squared = 0.0;
    for (Eigen::Index j = 0; j < q; ++j) {
        if (values[j] > threshold) squared += projected[j] * projected[j] / values[j];
    }
    out.squared = squared;
    out.distance = std::sqrt(squared);
    return out;
}

GofReport summarize_gof(std::span<const std::string> names, const Eigen::VectorXd& observed,
                        const Eigen::MatrixXd& simulated, const GofOptions& options) {
    if (simulated.rows() < 2) throw ValidationError("goodness of fit needs at least 2 simulated networks");
    GofReport report;
    report.sample_count = static_cast<std::size_t>(simulated.rows());
    for (Eigen::Index j = 0; j < simulated.cols(); ++j) {
        const Eigen::VectorXd column = simulated.col(j);
        GofRow row;
        row.name = names[static_cast<std::size_t>(j)];
        row.observed = observed[j];
        row.sim_min = column.minCoeff();
        row.sim_max = column.maxCoeff();
        row.sim_mean = std::clamp(column.mean(), row.sim_min, row.sim_max);
        row.p = empirical_p(std::span<const double>(column.data(), static_cast<std::size_t>(column.size())),
                            observed[j]);
        report.rows.push_back(std::move(row));
    }
    const Mahalanobis m = mahalanobis_distance(observed, simulated, names, options.allow_pseudo_inverse);
    report.mahalanobis = m.distance;
    report.mahalanobis_squared = m.squared;
    report.pseudo_inverse = m.pseudo_inverse;
    if (m.pseudo_inverse) {
        report.warnings.push_back("simulated covariance is singular (statistic '" +
                                  names[*m.offending] + "'); Mahalanobis distance uses the pseudo-inverse");
    }
    return report;
}

namespace {

std::vector<DegreeGofRow> degree_rows(const BipartiteGraph& graph, const Simulation& sim) {
    std::vector<DegreeGofRow> rows;
    const std::size_t n = graph.first_size();
    const std::size_t m = graph.second_size();
    for (Side side : {Side::first, Side::second}) {
        const std::size_t nodes = side == Side::first ? n : m;
        const std::size_t max_degree = side == Side::first ? m : n;
        // counts[s][d] = nodes of degree d in sample s
        std::vector<std::vector<double>> counts(sim.adjacency.size(), std::vector<double>(max_degree + 1, 0.0));
        for (std::size_t s = 0; s < sim.adjacency.size(); ++s) {
            const auto& adj = sim.adjacency[s];
            for (std::size_t v = 0; v < nodes; ++v) {
                std::size_t d = 0;
                if (side == Side::first) {
                    for (std::size_t k = 0; k < m; ++k) d += adj[v * m + k];
                } else {
                    for (std::size_t i = 0; i < n; ++i) d += adj[i * m + v];
                }
                counts[s][d] += 1.0;
            }
        }
        std::vector<double> observed(max_degree + 1, 0.0);
        for (std::size_t d : graph.degrees(side)) observed[d] += 1.0;
        for (std::size_t d = 0; d <= max_degree; ++d) {
            std::vector<double> column(counts.size());
            for (std::size_t s = 0; s < counts.size(); ++s) column[s] = counts[s][d];
            const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
            if (observed[d] == 0.0 && *hi == 0.0) continue;
            DegreeGofRow row;
            row.side = side;
            row.degree = d;
            row.observed = observed[d];
            row.sim_min = *lo;
            row.sim_max = *hi;
            double sum = 0.0;
            for (double c : column) sum += c;
            row.sim_mean = std::clamp(sum / static_cast<double>(column.size()), *lo, *hi);
            row.p = empirical_p(column, observed[d]);
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace

GofReport gof(const ModelSpec& spec, const BipartiteGraph& graph, const AttributeTable& attrs,
              const FitResult& fit, const SamplerConfig& config, const GofOptions& options) {
    if (!fit.convergence.converged) throw ValidationError("goodness of fit requires a converged fit");
    if (config.sample_count < 2) throw ValidationError("goodness of fit needs sample_count >= 2");
    const BoundModel model(spec, graph, attrs);
    if (fit.names != model.names()) throw ValidationError("fit terms do not match the model");
    const Simulation sim = simulate(model, fit.theta, graph, config, options.degree_distribution);
    GofReport report = summarize_gof(model.names(), model.evaluate(graph), sim.statistics, options);
    report.seed = config.seed;
    if (options.degree_distribution) report.degree_rows = degree_rows(graph, sim);
    return report;
}

} // namespace bergm

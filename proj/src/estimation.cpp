#include "bergm/estimation.hpp"

#include "bergm/error.hpp"

#include <cmath>
#include <map>

namespace bergm {

std::string_view to_string(FitMethod method) {
    switch (method) {
    case FitMethod::mple: return "mple";
    case FitMethod::mcmle: return "mcmle";
    case FitMethod::exact: return "exact";
    }
    return "?";
}

FitMethod fit_method_from_string(std::string_view text) {
    if (text == "mple") return FitMethod::mple;
    if (text == "mcmle") return FitMethod::mcmle;
    if (text == "exact") return FitMethod::exact;
    throw ValidationError("unknown method '" + std::string(text) + "' (expected mple, mcmle or exact)");
}

std::string_view to_string(LikelihoodKind kind) {
    switch (kind) {
    case LikelihoodKind::exact: return "exact";
    case LikelihoodKind::pseudo: return "pseudo";
    case LikelihoodKind::bridge: return "bridge";
    }
    return "?";
}

InformationCriteria information_criteria(double log_likelihood, std::size_t q, std::size_t dyads) {
    const double params = static_cast<double>(q);
    return {-2.0 * log_likelihood + 2.0 * params,
            -2.0 * log_likelihood + params * std::log(static_cast<double>(dyads))};
}

InformationCriteria information_criteria(const FitResult& fit, const BipartiteGraph& graph) {
    return information_criteria(fit.log_likelihood, fit.size(), graph.dyad_count());
}

double two_sided_normal_p(double z) {
    if (std::isnan(z)) return 1.0;
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

std::string significance_stars(double p) {
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    if (p < 0.1) return ".";
    return "";
}

void finalize_fit(FitResult& fit) {
    const auto q = fit.theta.size();
    fit.z_values.resize(q);
    fit.p_values.resize(q);
    for (Eigen::Index j = 0; j < q; ++j) {
        fit.z_values[j] = fit.theta[j] / fit.std_errors[j];
        fit.p_values[j] = two_sided_normal_p(fit.z_values[j]);
    }
    const auto ic = information_criteria(fit.log_likelihood, fit.size(), fit.dyad_count);
    fit.aic = ic.aic;
    fit.bic = ic.bic;
}

// ---------------------------------------------------------------------------

namespace {

/// log(1 + exp(x)) without overflow.
double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

/// Dyads grouped by identical change-statistic rows.
struct Design {
    Eigen::MatrixXd rows;      // distinct change-statistic vectors
    Eigen::VectorXd trials;    // dyads sharing the row
    Eigen::VectorXd ties;      // of which present
};

Design build_design(const BoundModel& model, const BipartiteGraph& graph) {
    const std::size_t q = model.size();
    std::map<std::vector<double>, std::pair<double, double>> groups;
    std::vector<double> delta(q);
    const auto adj = graph.adjacency();
    const std::size_t m = graph.second_size();
    for (std::size_t i = 0; i < graph.first_size(); ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            model.change(adj, i, k, delta.data());
            auto& g = groups[delta];
            g.first += 1.0;
            if (adj[i * m + k]) g.second += 1.0;
        }
    }
    Design d;
    d.rows.resize(static_cast<Eigen::Index>(groups.size()), static_cast<Eigen::Index>(q));
    d.trials.resize(static_cast<Eigen::Index>(groups.size()));
    d.ties.resize(static_cast<Eigen::Index>(groups.size()));
    Eigen::Index r = 0;
    for (const auto& [row, counts] : groups) {
        for (std::size_t j = 0; j < q; ++j) d.rows(r, static_cast<Eigen::Index>(j)) = row[j];
        d.trials[r] = counts.first;
        d.ties[r] = counts.second;
        ++r;
    }
    return d;
}

double pseudo_objective(const Design& d, const Eigen::VectorXd& theta) {
    const Eigen::VectorXd eta = d.rows * theta;
    double value = 0.0;
    for (Eigen::Index r = 0; r < eta.size(); ++r) {
        value += d.ties[r] * eta[r] - d.trials[r] * softplus(eta[r]);
    }
    return value;
}

void check_rank(const Design& d, const std::vector<std::string>& names) {
    Eigen::MatrixXd weighted = d.trials.cwiseSqrt().asDiagonal() * d.rows;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(weighted);
    qr.setThreshold(1e-10);
    const auto rank = qr.rank();
    if (rank < weighted.cols()) {
        const auto culprit = static_cast<std::size_t>(qr.colsPermutation().indices()[rank]);
        throw RankDeficiencyError("change statistics are collinear; term '" + names[culprit] +
                                      "' is a combination of the others",
                                  names[culprit]);
    }
}

constexpr double separation_se = 1e3;

} // namespace

double log_pseudolikelihood(const BoundModel& model, const BipartiteGraph& graph,
                            const Eigen::VectorXd& theta) {
    validate_theta(model, theta);
    return pseudo_objective(build_design(model, graph), theta);
}

FitResult fit_mple(const ModelSpec& spec, const BipartiteGraph& graph, const AttributeTable& attrs,
                   const MpleOptions& options) {
    const BoundModel model(spec, graph, attrs);
    const auto q = static_cast<Eigen::Index>(model.size());
    if (graph.dyad_count() == 0) throw ValidationError("cannot fit a graph without dyads");
    const Design design = build_design(model, graph);
    check_rank(design, model.names());

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(q);
    Eigen::VectorXd grad(q);
    Eigen::MatrixXd info(q, q);
    double objective = pseudo_objective(design, theta);
    std::size_t iter = 0;
    bool converged = false;

    auto derivatives = [&](const Eigen::VectorXd& th) {
        const Eigen::VectorXd eta = design.rows * th;
        Eigen::VectorXd residual(eta.size()), weight(eta.size());
        for (Eigen::Index r = 0; r < eta.size(); ++r) {
            const double p = logistic(eta[r]);
            residual[r] = design.ties[r] - design.trials[r] * p;
            weight[r] = design.trials[r] * p * (1.0 - p);
        }
        grad = design.rows.transpose() * residual;
        info = design.rows.transpose() * weight.asDiagonal() * design.rows;
    };

    derivatives(theta);
    for (; iter < options.max_iterations; ++iter) {
        if (grad.norm() <= options.gradient_tolerance) {
            converged = true;
            break;
        }
        Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
        Eigen::VectorXd step = ldlt.solve(grad);
        if (ldlt.info() != Eigen::Success || !step.allFinite()) break;
        double scale = 1.0;
        Eigen::VectorXd candidate = theta + step;
        double value = pseudo_objective(design, candidate);
        while (value < objective && scale > 1e-10) {
            scale *= 0.5;
            candidate = theta + scale * step;
            value = pseudo_objective(design, candidate);
        }
        if (value < objective) break;
        theta = candidate;
        objective = value;
        derivatives(theta);
    }

    FitResult fit;
    fit.method = FitMethod::mple;
    fit.names = model.names();
    fit.theta = theta;
    fit.dyad_count = graph.dyad_count();
    Eigen::VectorXd se(q);
    {
        const Eigen::MatrixXd inverse = info.ldlt().solve(Eigen::MatrixXd::Identity(q, q));
        for (Eigen::Index j = 0; j < q; ++j) se[j] = std::sqrt(std::max(inverse(j, j), 0.0));
    }
    // Separated terms drift off to infinity with vanishing curvature.
    Eigen::Index worst = -1;
    double worst_se = separation_se;
    for (Eigen::Index j = 0; j < q; ++j) {
        const double s = std::isfinite(se[j]) ? se[j] : std::numeric_limits<double>::infinity();
        if (s > worst_se || !std::isfinite(theta[j])) {
            worst = j;
            worst_se = s;
        }
    }
    if (worst >= 0) {
        const auto& name = fit.names[static_cast<std::size_t>(worst)];
        throw SeparationError("term '" + name + "' perfectly predicts tie states; its estimate diverges",
                              name);
    }
    if (!converged) {
        throw ConvergenceError("MPLE did not converge in " + std::to_string(options.max_iterations) +
                               " Newton iterations (gradient norm " + std::to_string(grad.norm()) + ")");
    }
    fit.std_errors = se;
    fit.log_likelihood = objective;
    fit.likelihood_kind = model.dyad_independent() ? LikelihoodKind::exact : LikelihoodKind::pseudo;
    fit.convergence = {true, iter, grad.norm(), {}};
    finalize_fit(fit);
    return fit;
}

} // namespace bergm

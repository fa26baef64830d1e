#include "bergm/estimation.hpp"

#include "bergm/error.hpp"

#include <bit>
#include <cmath>
#include <map>

namespace bergm {

ExactDistribution::ExactDistribution(const BoundModel& model) {
    const std::size_t n = model.first_size();
    const std::size_t m = model.second_size();
    const std::size_t dyads = n * m;
    if (dyads > exact_dyad_cap) {
        throw ValidationError("exact enumeration is capped at " + std::to_string(exact_dyad_cap) +
                              " dyads; graph has " + std::to_string(dyads));
    }
    const std::size_t q = model.size();

    // Walk all graphs in Gray-code order, one toggle per step.
    std::vector<std::uint8_t> adj(dyads, 0);
    StatisticVector stats = model.evaluate(adj);
    std::vector<double> delta(q);
    std::map<std::vector<double>, double> tally;
    auto record = [&] {
        tally[std::vector<double>(stats.data(), stats.data() + stats.size())] += 1.0;
    };
    record();
    const std::uint64_t total = std::uint64_t{1} << dyads;
    for (std::uint64_t g = 1; g < total; ++g) {
        const auto dyad = static_cast<std::size_t>(std::countr_zero(g));
        model.change(adj, dyad / m, dyad % m, delta.data());
        const double sign = adj[dyad] ? -1.0 : 1.0;
        for (std::size_t j = 0; j < q; ++j) stats[static_cast<Eigen::Index>(j)] += sign * delta[j];
        adj[dyad] ^= 1;
        record();
    }

    support_.resize(static_cast<Eigen::Index>(tally.size()), static_cast<Eigen::Index>(q));
    counts_.resize(static_cast<Eigen::Index>(tally.size()));
    Eigen::Index r = 0;
    for (const auto& [row, count] : tally) {
        for (std::size_t j = 0; j < q; ++j) support_(r, static_cast<Eigen::Index>(j)) = row[j];
        counts_[r++] = count;
    }
}

Eigen::VectorXd ExactDistribution::weights(const Eigen::VectorXd& theta, double& log_norm) const {
    Eigen::VectorXd logw = support_ * theta + counts_.array().log().matrix();
    const double top = logw.maxCoeff();
    Eigen::VectorXd w = (logw.array() - top).exp().matrix();
    const double sum = w.sum();
    log_norm = top + std::log(sum);
    return w / sum;
}

double ExactDistribution::log_normalizer(const Eigen::VectorXd& theta) const {
    double log_norm = 0.0;
    weights(theta, log_norm);
    return log_norm;
}

Eigen::VectorXd ExactDistribution::mean(const Eigen::VectorXd& theta) const {
    double log_norm = 0.0;
    const Eigen::VectorXd w = weights(theta, log_norm);
    return support_.transpose() * w;
}

Eigen::MatrixXd ExactDistribution::covariance(const Eigen::VectorXd& theta) const {
    double log_norm = 0.0;
    const Eigen::VectorXd w = weights(theta, log_norm);
    const Eigen::VectorXd mu = support_.transpose() * w;
    const Eigen::MatrixXd centered = support_.rowwise() - mu.transpose();
    return centered.transpose() * w.asDiagonal() * centered;
}

FitResult fit_exact(const ModelSpec& spec, const BipartiteGraph& graph, const AttributeTable& attrs,
                    const ExactOptions& options) {
    const BoundModel model(spec, graph, attrs);
    const ExactDistribution dist(model);
    const auto q = static_cast<Eigen::Index>(model.size());
    const StatisticVector observed = model.evaluate(graph);
    const auto& names = model.names();

    {
        const Eigen::MatrixXd cov0 = dist.covariance(Eigen::VectorXd::Zero(q));
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(cov0);
        qr.setThreshold(1e-10);
        if (qr.rank() < q) {
            const auto culprit = static_cast<std::size_t>(qr.colsPermutation().indices()[qr.rank()]);
            throw RankDeficiencyError("term '" + names[culprit] +
                                          "' is an affine combination of the others over all graphs",
                                      names[culprit]);
        }
    }
    for (Eigen::Index j = 0; j < q; ++j) {
        const double lo = dist.support().col(j).minCoeff();
        const double hi = dist.support().col(j).maxCoeff();
        if (observed[j] <= lo || observed[j] >= hi) {
            throw MleNonexistenceError("MLE does not exist: observed '" + names[static_cast<std::size_t>(j)] +
                                       "' = " + std::to_string(observed[j]) +
                                       " is at the edge of its attainable range");
        }
    }

    auto loglik = [&](const Eigen::VectorXd& th) { return th.dot(observed) - dist.log_normalizer(th); };

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(q);
    double value = loglik(theta);
    Eigen::VectorXd grad = observed - dist.mean(theta);
    Eigen::MatrixXd info = dist.covariance(theta);
    std::size_t iter = 0;
    bool converged = false;
    for (; iter < options.max_iterations; ++iter) {
        if (grad.norm() <= options.gradient_tolerance) {
            converged = true;
            break;
        }
        const Eigen::VectorXd step = info.ldlt().solve(grad);
        if (!step.allFinite()) break;
        double scale = 1.0;
        Eigen::VectorXd candidate = theta + step;
        double next = loglik(candidate);
        while (next < value && scale > 1e-10) {
            scale *= 0.5;
            candidate = theta + scale * step;
            next = loglik(candidate);
        }
        if (next < value) break;
        theta = candidate;
        value = next;
        grad = observed - dist.mean(theta);
        info = dist.covariance(theta);
    }

    const Eigen::MatrixXd inverse = info.ldlt().solve(Eigen::MatrixXd::Identity(q, q));
    Eigen::VectorXd se(q);
    for (Eigen::Index j = 0; j < q; ++j) se[j] = std::sqrt(std::max(inverse(j, j), 0.0));
    if (!converged || !se.allFinite() || se.maxCoeff() > 1e3) {
        throw MleNonexistenceError(
            "MLE does not exist: the observed statistics lie on the boundary of the attainable set");
    }

    FitResult fit;
    fit.method = FitMethod::exact;
    fit.names = names;
    fit.theta = theta;
    fit.std_errors = se;
    fit.log_likelihood = value;
    fit.likelihood_kind = LikelihoodKind::exact;
    fit.dyad_count = graph.dyad_count();
    fit.convergence = {true, iter, grad.norm(), {}};
    finalize_fit(fit);
    return fit;
}

} // namespace bergm

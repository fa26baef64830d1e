#include "bergm/estimation.hpp"

#include "bergm/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace bergm {

namespace {

/// log of the mean of exp(x).
double log_mean_exp(const Eigen::VectorXd& x) {
    const double top = x.maxCoeff();
    return top + std::log((x.array() - top).exp().mean());
}

Eigen::VectorXd softmax(const Eigen::VectorXd& x) {
    const double top = x.maxCoeff();
    Eigen::VectorXd w = (x.array() - top).exp().matrix();
    return w / w.sum();
}

Eigen::VectorXd column_sd(const Eigen::MatrixXd& s) {
    const Eigen::RowVectorXd mean = s.colwise().mean();
    const Eigen::MatrixXd centered = s.rowwise() - mean;
    const double denom = std::max<double>(1.0, static_cast<double>(s.rows() - 1));
    return (centered.array().square().colwise().sum() / denom).sqrt().transpose();
}

struct StepResult {
    Eigen::VectorXd delta;
    double gamma = 1.0;
    Eigen::MatrixXd covariance;  // importance-weighted covariance at delta
};

/// Newton maximisation of the Geyer-Thompson objective for one target.
std::optional<StepResult> maximize(const Eigen::MatrixXd& sampled, const Eigen::VectorXd& target,
                                   const Eigen::VectorXd& sd) {
    const GeyerThompson gt(sampled, target);
    const auto q = sampled.cols();
    const double tolerance = 1e-9 * std::max(1.0, sd.norm());
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(q);
    double value = gt.value(delta);
    // Weights piling onto a handful of draws means the target sits on or
    // beyond the sampled hull and delta is running away.
    const auto accept = [&](const Eigen::VectorXd& d, const Eigen::MatrixXd& cov) -> std::optional<StepResult> {
        const Eigen::VectorXd w = softmax(gt.centered * d);
        const double ess = 1.0 / w.squaredNorm();
        const double floor = std::max(2.0, 0.01 * static_cast<double>(sampled.rows()));
        if (ess < floor) return std::nullopt;
        return StepResult{d, 1.0, cov};
    };
    for (int iter = 0; iter < 200; ++iter) {
        const Eigen::VectorXd grad = gt.gradient(delta);
        const Eigen::MatrixXd cov = gt.covariance(delta);
        if (grad.norm() <= tolerance) return accept(delta, cov);
        Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
        const Eigen::VectorXd step = ldlt.solve(grad);
        if (ldlt.info() != Eigen::Success || !step.allFinite()) return std::nullopt;
        // Half the Newton decrement is the predicted gain; below rounding
        // level the line search cannot make progress and delta is optimal.
        if (0.5 * grad.dot(step) <= 1e-13) return accept(delta, cov);
        double scale = 1.0;
        Eigen::VectorXd candidate = delta + step;
        double next = gt.value(candidate);
        while (!(next >= value) && scale > 1e-10) {
            scale *= 0.5;
            candidate = delta + scale * step;
            next = gt.value(candidate);
        }
        if (!(next >= value)) return std::nullopt;
        delta = candidate;
        value = next;
    }
    return std::nullopt;
}

/// Step toward the observed statistics, halving the step while they fall
/// outside what the sample can represent.
StepResult stepped_update(const Eigen::MatrixXd& sampled, const Eigen::VectorXd& observed,
                          double min_step) {
    const Eigen::VectorXd mean = sampled.colwise().mean().transpose();
    const Eigen::VectorXd lo = sampled.colwise().minCoeff().transpose();
    const Eigen::VectorXd hi = sampled.colwise().maxCoeff().transpose();
    const Eigen::VectorXd sd = column_sd(sampled);
    for (double gamma = 1.0; gamma >= min_step; gamma *= 0.5) {
        const Eigen::VectorXd target = gamma * observed + (1.0 - gamma) * mean;
        if (!((target.array() > lo.array()) && (target.array() < hi.array())).all()) continue;
        if (auto result = maximize(sampled, target, sd)) {
            result->gamma = gamma;
            return *result;
        }
    }
    throw NumericalError(
        "observed statistics remain outside the hull of the sampled statistics after step halving "
        "(model near-degenerate)");
}

void check_gradient(const GeyerThompson& gt, const Eigen::VectorXd& sd, Rng& rng) {
    const auto q = gt.centered.cols();
    for (int point = 0; point < 3; ++point) {
        Eigen::VectorXd delta(q), h(q);
        for (Eigen::Index j = 0; j < q; ++j) {
            const double scale = sd[j] > 0.0 ? 1.0 / sd[j] : 0.0;
            delta[j] = (rng.uniform() - 0.5) * 0.2 * scale;
            h[j] = 1e-4 * (sd[j] > 0.0 ? 1.0 / sd[j] : 1.0);
        }
        const Eigen::VectorXd analytic = gt.gradient(delta);
        const double denom = std::max(analytic.lpNorm<Eigen::Infinity>(), 1e-6 * sd.norm());
        for (Eigen::Index j = 0; j < q; ++j) {
            Eigen::VectorXd up = delta, down = delta;
            up[j] += h[j];
            down[j] -= h[j];
            const double numeric = (gt.value(up) - gt.value(down)) / (2.0 * h[j]);
            if (std::abs(numeric - analytic[j]) > 1e-4 * denom) {
                throw InternalConsistencyError("Geyer-Thompson gradient check failed for coordinate " +
                                               std::to_string(j));
            }
        }
    }
}

/// Variance of the sample mean by non-overlapping batch means.
Eigen::MatrixXd batch_mean_covariance(const Eigen::MatrixXd& s) {
    const auto rows = s.rows();
    const auto batches = std::max<Eigen::Index>(2, static_cast<Eigen::Index>(std::sqrt(static_cast<double>(rows))));
    const auto size = rows / batches;
    if (size == 0) return Eigen::MatrixXd::Zero(s.cols(), s.cols());
    Eigen::MatrixXd means(batches, s.cols());
    for (Eigen::Index b = 0; b < batches; ++b) means.row(b) = s.middleRows(b * size, size).colwise().mean();
    const Eigen::MatrixXd centered = means.rowwise() - means.colwise().mean();
    return centered.transpose() * centered / static_cast<double>((batches - 1) * batches);
}

std::string format_trajectory(const std::vector<Eigen::VectorXd>& trajectory) {
    std::ostringstream out;
    for (std::size_t t = 0; t < trajectory.size(); ++t) {
        out << "\n  iteration " << t << ":";
        for (Eigen::Index j = 0; j < trajectory[t].size(); ++j) out << ' ' << trajectory[t][j];
    }
    return out.str();
}

} // namespace

GeyerThompson::GeyerThompson(const Eigen::MatrixXd& sampled, const Eigen::VectorXd& observed)
    : centered(sampled.rowwise() - observed.transpose()) {}

double GeyerThompson::value(const Eigen::VectorXd& delta) const {
    return -log_mean_exp(centered * delta);
}

Eigen::VectorXd GeyerThompson::gradient(const Eigen::VectorXd& delta) const {
    const Eigen::VectorXd w = softmax(centered * delta);
    return -(centered.transpose() * w);
}

Eigen::MatrixXd GeyerThompson::covariance(const Eigen::VectorXd& delta) const {
    const Eigen::VectorXd w = softmax(centered * delta);
    const Eigen::VectorXd mu = centered.transpose() * w;
    const Eigen::MatrixXd c = centered.rowwise() - mu.transpose();
    return c.transpose() * w.asDiagonal() * c;
}

FitResult fit_mcmle(const ModelSpec& spec, const BipartiteGraph& graph, const AttributeTable& attrs,
                    const McmleOptions& options) {
    options.sampler.validate();
    if (options.sampler.sample_count < 2) throw ValidationError("MC-MLE needs at least 2 samples per iteration");
    const BoundModel model(spec, graph, attrs);
    const auto q = static_cast<Eigen::Index>(model.size());
    const StatisticVector observed = model.evaluate(graph);

    Eigen::VectorXd theta;
    if (options.init) {
        theta = *options.init;
        validate_theta(model, theta);
    } else {
        theta = fit_mple(spec, graph, attrs).theta;
    }

    FitResult fit;
    fit.method = FitMethod::mcmle;
    fit.names = model.names();
    fit.dyad_count = graph.dyad_count();
    fit.convergence.trajectory.push_back(theta);

    Rng check_rng(derive_seed(options.sampler.seed, 0xC4EC));
    Eigen::MatrixXd covariance;
    Eigen::MatrixXd last_sample;
    bool converged = false;
    double worst = std::numeric_limits<double>::infinity();
    std::size_t iter = 0;
    while (iter < options.max_iterations) {
        SamplerConfig config = options.sampler;
        config.seed = derive_seed(options.sampler.seed, iter);
        const Simulation sim = simulate(model, theta, graph, config);
        const Eigen::MatrixXd& s = sim.statistics;
        const Eigen::VectorXd mean = s.colwise().mean().transpose();
        const Eigen::VectorXd sd = column_sd(s);

        worst = 0.0;
        for (Eigen::Index j = 0; j < q; ++j) {
            const double gap = std::abs(observed[j] - mean[j]);
            const double ratio = sd[j] > 0.0 ? gap / sd[j]
                                             : (gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
            worst = std::max(worst, ratio);
        }
        converged = worst <= options.tolerance;

        if (options.check_gradient) check_gradient(GeyerThompson(s, observed), sd, check_rng);

        const StepResult step = stepped_update(s, observed, options.min_step);
        theta += step.delta;
        covariance = step.covariance;
        last_sample = s;
        fit.convergence.trajectory.push_back(theta);
        ++iter;
        // The final Geyer-Thompson step from a converged sample refines theta.
        if (converged && step.gamma == 1.0) break;
        converged = false;
    }
    if (!converged) {
        throw ConvergenceError("MC-MLE did not converge in " + std::to_string(options.max_iterations) +
                               " iterations; largest standardized gap " + std::to_string(worst) +
                               "; trajectory:" + format_trajectory(fit.convergence.trajectory));
    }

    Eigen::MatrixXd inverse = covariance.ldlt().solve(Eigen::MatrixXd::Identity(q, q));
    if (options.inflate_se) inverse += inverse * batch_mean_covariance(last_sample) * inverse;
    fit.theta = theta;
    fit.std_errors.resize(q);
    for (Eigen::Index j = 0; j < q; ++j) fit.std_errors[j] = std::sqrt(std::max(inverse(j, j), 0.0));

    if (model.dyad_independent()) {
        fit.log_likelihood = log_pseudolikelihood(model, graph, theta);
        fit.likelihood_kind = LikelihoodKind::exact;
    } else {
        // ln kappa(0) = n m ln 2; bridge along t * theta for t in [0, 1].
        const std::size_t bridges = std::max<std::size_t>(1, options.bridges);
        const Eigen::VectorXd increment = theta / static_cast<double>(bridges);
        double log_kappa = static_cast<double>(graph.dyad_count()) * std::log(2.0);
        for (std::size_t b = 0; b < bridges; ++b) {
            const Eigen::VectorXd mid = theta * ((static_cast<double>(b) + 0.5) / static_cast<double>(bridges));
            SamplerConfig config = options.sampler;
            config.sample_count = std::max<std::size_t>(2, options.bridge_samples);
            config.seed = derive_seed(options.sampler.seed, 1000 + b);
            const Simulation sim = simulate(model, mid, graph, config);
            const Eigen::VectorXd half = sim.statistics * (0.5 * increment);
            log_kappa += log_mean_exp(half) - log_mean_exp(-half);
        }
        fit.log_likelihood = theta.dot(observed) - log_kappa;
        fit.likelihood_kind = LikelihoodKind::bridge;
    }
    fit.convergence.converged = true;
    fit.convergence.iterations = iter;
    fit.convergence.gradient_norm = worst;
    finalize_fit(fit);
    return fit;
}

} // namespace bergm

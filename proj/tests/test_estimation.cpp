#include <doctest.h>

#include "bergm/error.hpp"
#include "bergm/estimation.hpp"
#include "support/random_models.hpp"
#include "support/table1.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace bergm;

namespace {

double logit(double p) { return std::log(p / (1.0 - p)); }

/// Closed-form MLE of edges + activity on the first `top` skills: each
/// activity row is its own saturated logistic group, the rest share the
/// edges coefficient.
struct ClosedForm {
    std::vector<double> theta, se;
    double log_likelihood = 0.0;
};

ClosedForm closed_form(std::size_t top) {
    const double m = table1::brochures;
    double rest_edges = table1::total_edges;
    for (std::size_t s = 0; s < top; ++s) rest_edges -= static_cast<double>(table1::degrees[s]);
    const double rest_dyads = static_cast<double>(table1::skills - top) * m;
    const double p = rest_edges / rest_dyads;
    ClosedForm out;
    out.theta.push_back(logit(p));
    const double var_edges = 1.0 / (rest_dyads * p * (1.0 - p));
    out.se.push_back(std::sqrt(var_edges));
    out.log_likelihood = rest_edges * std::log(p) + (rest_dyads - rest_edges) * std::log(1.0 - p);
    for (std::size_t s = 0; s < top; ++s) {
        const double d = static_cast<double>(table1::degrees[s]);
        const double ps = d / m;
        out.theta.push_back(logit(ps) - logit(p));
        out.se.push_back(std::sqrt(1.0 / (m * ps * (1.0 - ps)) + var_edges));
        out.log_likelihood += d * std::log(ps) + (m - d) * std::log(1.0 - ps);
    }
    return out;
}

ModelSpec popularity_model(std::size_t top) {
    std::vector<Term> terms{Term::edges()};
    for (std::size_t s = 0; s < top; ++s) terms.push_back(Term::node_activity(Side::first, table1::names[s]));
    return ModelSpec(std::move(terms));
}

/// Gradient of the log pseudolikelihood, summed dyad by dyad.
Eigen::VectorXd pseudo_gradient(const BoundModel& model, const BipartiteGraph& g, const Eigen::VectorXd& theta) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(theta.size());
    Eigen::VectorXd delta(theta.size());
    const auto y = g.adjacency();
    for (std::size_t i = 0; i < g.first_size(); ++i) {
        for (std::size_t k = 0; k < g.second_size(); ++k) {
            model.change(y, i, k, delta.data());
            const double p = 1.0 / (1.0 + std::exp(-theta.dot(delta)));
            grad += (static_cast<double>(g.has_edge(i, k)) - p) * delta;
        }
    }
    return grad;
}

} // namespace

TEST_CASE("MPLE of popularity models equals the closed form") {
    const auto net = table1::network();
    for (std::size_t top : {3u, 5u}) {
        const FitResult fit = fit_mple(popularity_model(top), net.graph, net.attributes);
        const ClosedForm cf = closed_form(top);
        REQUIRE(fit.size() == top + 1);
        for (std::size_t j = 0; j <= top; ++j) {
            const auto i = static_cast<Eigen::Index>(j);
            CHECK(fit.theta[i] == doctest::Approx(cf.theta[j]).epsilon(1e-9));
            CHECK(fit.std_errors[i] == doctest::Approx(cf.se[j]).epsilon(1e-6));
        }
        CHECK(fit.log_likelihood == doctest::Approx(cf.log_likelihood).epsilon(1e-12));
        CHECK(fit.likelihood_kind == LikelihoodKind::exact);
        CHECK(fit.convergence.converged);
    }
}

TEST_CASE("popularity model coefficients match the published table") {
    const auto net = table1::network();
    const FitResult m1 = fit_mple(popularity_model(3), net.graph, net.attributes);
    const double theta1[] = {-1.207, 3.739, 2.789, 1.918};
    const double se1[] = {0.029, 0.240, 0.168, 0.135};
    for (Eigen::Index j = 0; j < 4; ++j) {
        CHECK(std::abs(m1.theta[j] - theta1[j]) < 0.002);
        CHECK(std::abs(m1.std_errors[j] - se1[j]) < 0.002);
    }
    // Published information criteria are rounded to integers.
    CHECK(std::abs(m1.aic - 7664.0) < 0.5);
    CHECK(std::abs(m1.bic - 7692.0) < 0.5);

    const FitResult m2 = fit_mple(popularity_model(5), net.graph, net.attributes);
    const double theta2[] = {-1.349, 3.881, 2.931, 2.060, 1.411, 1.349};
    for (Eigen::Index j = 0; j < 6; ++j) CHECK(std::abs(m2.theta[j] - theta2[j]) < 0.002);
    CHECK(std::abs(m2.aic - 7461.0) < 0.5);
    CHECK(std::abs(m2.bic - 7502.0) < 0.5);
    for (Eigen::Index j = 0; j < 6; ++j) CHECK(significance_stars(m2.p_values[j]) == "***");
}

TEST_CASE("information criteria") {
    const auto ic = information_criteria(-100.0, 3, 50);
    CHECK(ic.aic == doctest::Approx(206.0));
    CHECK(ic.bic == doctest::Approx(200.0 + 3.0 * std::log(50.0)));
    CHECK(ic.bic - ic.aic == doctest::Approx(3.0 * (std::log(50.0) - 2.0)));
    CHECK(two_sided_normal_p(0.0) == doctest::Approx(1.0));
    CHECK(two_sided_normal_p(1.959963984540054) == doctest::Approx(0.05));
    CHECK(significance_stars(0.0005) == "***");
    CHECK(significance_stars(0.005) == "**");
    CHECK(significance_stars(0.02) == "*");
    CHECK(significance_stars(0.07) == ".");
    CHECK(significance_stars(0.5).empty());
}

TEST_CASE("MPLE satisfies the first-order condition") {
    std::mt19937_64 rng(21);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const auto c = random_models::random_case(rng, 7, 9);
        const ModelSpec spec = random_models::random_spec(rng, c);
        FitResult fit;
        try {
            fit = fit_mple(spec, c.graph, c.attrs);
        } catch (const NumericalError&) {
            continue;  // collinear or separated draws have no finite MPLE
        }
        const BoundModel model(spec, c.graph, c.attrs);
        CHECK(pseudo_gradient(model, c.graph, fit.theta).lpNorm<Eigen::Infinity>() < 1e-6);
        CHECK(fit.log_likelihood == doctest::Approx(log_pseudolikelihood(model, c.graph, fit.theta)));
        CHECK(fit.likelihood_kind == (spec.dyad_independent() ? LikelihoodKind::exact : LikelihoodKind::pseudo));
        ++checked;
    }
    CHECK(checked > 20);
}

TEST_CASE("MPLE equals the exact MLE for dyad-independent specs") {
    std::mt19937_64 rng(22);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto c = random_models::random_case(rng, 4, 4);
        if (c.graph.dyad_count() > 16) continue;
        const Term activity = Term::node_activity(Side::first, c.graph.label(Side::first, 0));
        const ModelSpec spec(trial % 2 ? std::vector<Term>{Term::edges()} : std::vector<Term>{Term::edges(), activity});
        FitResult mple, exact;
        try {
            exact = fit_exact(spec, c.graph, c.attrs);
        } catch (const NumericalError&) {
            CHECK_THROWS_AS(fit_mple(spec, c.graph, c.attrs), NumericalError);
            continue;
        }
        mple = fit_mple(spec, c.graph, c.attrs);
        CHECK((mple.theta - exact.theta).lpNorm<Eigen::Infinity>() < 1e-6);
        CHECK(mple.log_likelihood == doctest::Approx(exact.log_likelihood).epsilon(1e-9));
        CHECK((mple.std_errors - exact.std_errors).lpNorm<Eigen::Infinity>() < 1e-5);
        ++checked;
    }
    CHECK(checked > 10);
}

TEST_CASE("exact fit of a small homophily model") {
    // Enumerated independently over all 512 graphs: the MLE is (-ln 2, ln 4).
    const std::vector<Dyad> edges{{0, 0}, {1, 0}, {1, 1}, {2, 2}};
    const auto g = BipartiteGraph::with_generated_labels(3, 3, edges);
    AttributeTable attrs(g);
    attrs.add_categorical("cls", Side::first, {"A", "A", "B"});
    const ModelSpec spec({Term::edges(), Term::node_match("cls")});
    const FitResult fit = fit_exact(spec, g, attrs);
    CHECK(fit.theta[0] == doctest::Approx(-std::log(2.0)).epsilon(1e-8));
    CHECK(fit.theta[1] == doctest::Approx(std::log(4.0)).epsilon(1e-8));
    CHECK(fit.std_errors[0] == doctest::Approx(0.9258201).epsilon(1e-6));
    CHECK(fit.std_errors[1] == doctest::Approx(1.8516402).epsilon(1e-6));
    CHECK(fit.log_likelihood == doctest::Approx(-5.898526551448714).epsilon(1e-10));
    CHECK(fit.likelihood_kind == LikelihoodKind::exact);
    CHECK(fit.bic - fit.aic == doctest::Approx(2.0 * (std::log(9.0) - 2.0)));

    const ExactDistribution dist(BoundModel(spec, g, attrs));
    CHECK(dist.counts().sum() == 512.0);
}

TEST_CASE("MC-MLE agrees with the exact MLE") {
    const std::vector<Dyad> edges{{0, 0}, {1, 0}, {1, 1}, {2, 2}};
    const auto g = BipartiteGraph::with_generated_labels(3, 3, edges);
    AttributeTable attrs(g);
    attrs.add_categorical("cls", Side::first, {"A", "A", "B"});
    const ModelSpec spec({Term::edges(), Term::node_match("cls")});
    McmleOptions options;
    options.sampler.sample_count = 20000;
    options.sampler.seed = 3;
    const FitResult fit = fit_mcmle(spec, g, attrs, options);
    CHECK(std::abs(fit.theta[0] + std::log(2.0)) < 0.05);
    CHECK(std::abs(fit.theta[1] - std::log(4.0)) < 0.05);
    CHECK(fit.likelihood_kind == LikelihoodKind::bridge);
    CHECK(std::abs(fit.log_likelihood + 5.898526551448714) < 0.05);
    CHECK(fit.convergence.converged);
    CHECK_FALSE(fit.convergence.trajectory.empty());

    // Same seed, same answer.
    const FitResult again = fit_mcmle(spec, g, attrs, options);
    CHECK(again.theta == fit.theta);
    CHECK(again.log_likelihood == fit.log_likelihood);
}

TEST_CASE("MC-MLE of a dyad-independent model reports the exact likelihood") {
    const auto net = table1::network();
    McmleOptions options;
    options.sampler.sample_count = 2000;
    const FitResult fit = fit_mcmle(popularity_model(3), net.graph, net.attributes, options);
    const ClosedForm cf = closed_form(3);
    for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(fit.theta[static_cast<Eigen::Index>(j)] - cf.theta[j]) < 0.05);
    CHECK(fit.likelihood_kind == LikelihoodKind::exact);
}

TEST_CASE("estimates do not depend on node order") {
    const auto net = table1::network();
    const auto& g = net.graph;
    // Reverse both partitions and carry labels, edges and attributes along.
    std::vector<std::string> first(g.labels(Side::first).rbegin(), g.labels(Side::first).rend());
    std::vector<std::string> second(g.labels(Side::second).rbegin(), g.labels(Side::second).rend());
    std::vector<std::pair<std::string, std::string>> edges;
    for (const Dyad& d : g.edges()) edges.emplace_back(g.label(Side::first, d.first), g.label(Side::second, d.second));
    const auto h = BipartiteGraph::from_labelled_edges(first, second, edges);
    AttributeTable attrs(h);
    std::vector<std::optional<double>> importance;
    for (const auto& label : first) importance.push_back(*net.attributes.get("importance").numbers[g.index_of(Side::first, label)]);
    attrs.add_quantitative("importance", Side::first, importance);
    std::vector<std::optional<std::string>> type;
    for (const auto& label : second) type.push_back(*net.attributes.get("type").levels[g.index_of(Side::second, label)]);
    attrs.add_categorical("type", Side::second, type, {"private", "public"});

    const ModelSpec spec({Term::edges(), Term::node_activity(Side::first, "Coordination"),
                          Term::node_match("importance"), Term::factor_second("type", "public")});
    const FitResult a = fit_mple(spec, g, net.attributes);
    const FitResult b = fit_mple(spec, h, attrs);
    CHECK((a.theta - b.theta).lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK((a.std_errors - b.std_errors).lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK(a.log_likelihood == doctest::Approx(b.log_likelihood).epsilon(1e-12));
}

TEST_CASE("degenerate fits are reported") {
    // r0 is tied to every brochure: its activity coefficient diverges.
    const std::vector<Dyad> edges{{0, 0}, {0, 1}, {0, 2}, {1, 1}, {2, 0}};
    const auto g = BipartiteGraph::with_generated_labels(3, 3, edges);
    AttributeTable attrs(g);
    attrs.add_categorical("all", Side::second, {"x", "x", "x"});
    const ModelSpec separated({Term::edges(), Term::node_activity(Side::first, "r0")});
    CHECK_THROWS_AS(fit_mple(separated, g, attrs), SeparationError);
    CHECK_THROWS_AS(fit_exact(separated, g, attrs), MleNonexistenceError);
    try {
        fit_mple(separated, g, attrs);
    } catch (const SeparationError& e) {
        CHECK(e.term() == "r0");
    }

    // Every brochure holds level x, so factor2 duplicates the edge count.
    const ModelSpec collinear({Term::edges(), Term::factor_second("all", "x")});
    CHECK_THROWS_AS(fit_mple(collinear, g, attrs), RankDeficiencyError);
    CHECK_THROWS_AS(fit_exact(collinear, g, attrs), RankDeficiencyError);

    const auto big = BipartiteGraph::with_generated_labels(5, 5, {});
    CHECK_THROWS_AS(fit_exact(ModelSpec({Term::edges()}), big, AttributeTable(big)), ValidationError);
    CHECK_THROWS_AS(fit_method_from_string("bayes"), ValidationError);
}

TEST_CASE("Geyer-Thompson gradient matches finite differences") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd sampled(200, 3);
    for (Eigen::Index r = 0; r < sampled.rows(); ++r) {
        for (Eigen::Index c = 0; c < 3; ++c) sampled(r, c) = normal(rng) * (1.0 + static_cast<double>(c));
    }
    const Eigen::VectorXd observed = Eigen::Vector3d(0.2, -0.1, 0.5);
    const GeyerThompson gt(sampled, observed);
    CHECK(gt.value(Eigen::VectorXd::Zero(3)) == doctest::Approx(0.0));
    const Eigen::VectorXd delta = Eigen::Vector3d(0.1, -0.05, 0.02);
    const Eigen::VectorXd grad = gt.gradient(delta);
    const double h = 1e-6;
    for (Eigen::Index j = 0; j < 3; ++j) {
        Eigen::VectorXd up = delta, down = delta;
        up[j] += h;
        down[j] -= h;
        CHECK(grad[j] == doctest::Approx((gt.value(up) - gt.value(down)) / (2.0 * h)).epsilon(1e-6));
    }
    // At delta = 0 the covariance is the plain sample covariance (divisor M).
    const Eigen::MatrixXd centered = sampled.rowwise() - sampled.colwise().mean();
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(sampled.rows());
    CHECK((gt.covariance(Eigen::VectorXd::Zero(3)) - cov).cwiseAbs().maxCoeff() < 1e-10);
}

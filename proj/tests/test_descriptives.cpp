#include <doctest.h>

#include "bergm/descriptives.hpp"
#include "bergm/error.hpp"
#include "support/table1.hpp"

#include <Eigen/SVD>

#include <cmath>

using namespace bergm;

TEST_CASE("ranking methods") {
    const std::vector<double> v{10, 20, 20, 5, 20, 1};
    CHECK(rank_descending(v, RankMethod::dense) == std::vector<std::size_t>{2, 1, 1, 3, 1, 4});
    CHECK(rank_descending(v, RankMethod::competition) == std::vector<std::size_t>{4, 1, 1, 5, 1, 6});
    CHECK(rank_descending(std::vector<double>{}, RankMethod::dense).empty());
}

TEST_CASE("degree ranking reproduces the published skill table") {
    const auto net = table1::network();
    const RankingTable table = ranking_table(net.graph, net.attributes);
    REQUIRE(table.rows.size() == table1::skills);
    CHECK(table.total_degree == table1::total_edges);
    CHECK(table.total_percent == doctest::Approx(100.0));
    for (std::size_t i = 0; i < table1::skills; ++i) {
        const RankingRow& row = table.rows[i];
        CHECK(row.skill == table1::names[i]);
        CHECK(row.degree == table1::degrees[i]);
        CHECK(std::abs(row.percent - table1::percents[i]) < 0.006);
        CHECK(row.centrality_rank == table1::centrality_ranks[i]);
        REQUIRE(row.importance_rank.has_value());
        CHECK(*row.importance_rank == table1::importance_ranks[i]);
    }

    // Dense ranking would compress the places after the tie at 75.
    const RankingTable dense = ranking_table(net.graph, net.attributes, "importance", RankMethod::dense);
    CHECK(dense.rows[13].centrality_rank == 13);

    const RankingTable bare = ranking_table(net.graph, net.attributes, "");
    CHECK_FALSE(bare.rows[0].importance.has_value());
    CHECK_THROWS_AS(ranking_table(net.graph, net.attributes, "region"), ValidationError);
}

TEST_CASE("eigenvector centrality is the leading singular vector") {
    const auto net = table1::network();
    const auto& g = net.graph;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.first_size()),
                                              static_cast<Eigen::Index>(g.second_size()));
    for (const Dyad& d : g.edges()) b(static_cast<Eigen::Index>(d.first), static_cast<Eigen::Index>(d.second)) = 1.0;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd u = svd.matrixU().col(0).cwiseAbs();
    const Eigen::VectorXd v = svd.matrixV().col(0).cwiseAbs();
    CHECK((eigenvector_centrality(g, Side::first) - u).lpNorm<Eigen::Infinity>() < 1e-8);
    CHECK((eigenvector_centrality(g, Side::second) - v).lpNorm<Eigen::Infinity>() < 1e-8);
    const auto empty = BipartiteGraph::with_generated_labels(3, 2, {});
    CHECK(eigenvector_centrality(empty, Side::first).isZero());
}

TEST_CASE("correlations") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    const std::vector<double> y{2, 4, 5, 4, 5};
    const Correlation c = correlate(x, y);
    CHECK(c.pearson == doctest::Approx(0.7745966692414834).epsilon(1e-12));
    CHECK(c.pearson_p == doctest::Approx(0.1240270626575546).epsilon(1e-9));
    CHECK(c.spearman == doctest::Approx(0.7378647873726218).epsilon(1e-12));
    CHECK(c.spearman_p == doctest::Approx(0.15461852312844906).epsilon(1e-9));

    const std::vector<double> reversed{5, 4, 3, 2, 1};
    const Correlation perfect = correlate(x, reversed);
    CHECK(perfect.pearson == doctest::Approx(-1.0));
    CHECK(perfect.pearson_p == 0.0);

    const std::vector<double> flat(5, 2.0);
    const Correlation undefined = correlate(x, flat);
    CHECK(std::isnan(undefined.pearson));
    CHECK(std::isnan(undefined.spearman_p));
    CHECK_THROWS_AS(correlate(std::vector<double>{1, 2}, std::vector<double>{1, 2}), ValidationError);
}

TEST_CASE("correlation report over the published degrees") {
    const auto net = table1::network();
    const std::vector<std::string> metrics{"degree", "eigenvector"};
    const CorrelationReport report = correlation_report(net.graph, net.attributes, metrics);
    CHECK(report.variables == std::vector<std::string>{"importance", "degree", "eigenvector"});
    CHECK(report.undefined.empty());
    CHECK(report.matrix[1][1].pearson == doctest::Approx(1.0));
    CHECK(report.matrix[0][1].pearson == doctest::Approx(report.matrix[1][0].pearson));
    const Correlation direct = correlate(report.values[1], report.values[2]);
    CHECK(report.matrix[1][2].spearman == direct.spearman);
    CHECK(report.matrix[1][2].spearman > 0.9);
    const std::vector<std::string> bad{"betweenness"};
    CHECK_THROWS_AS(correlation_report(net.graph, net.attributes, bad), ValidationError);
}

TEST_CASE("sub-graph summary") {
    const auto net = table1::network();
    const std::vector<std::string> by{"type", "region"};
    const auto rows = subgraph_summary(net.graph, net.attributes, by);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].level == "private");
    CHECK(rows[0].second_count == 80);
    CHECK(rows[1].second_count == 178);
    CHECK(rows[2].level == "AMES");
    CHECK(rows[2].second_count == 100);
    CHECK(rows[3].second_count == 32);
    CHECK(rows[4].second_count == 126);
    const SubgraphRow& whole = rows.back();
    CHECK(whole.attribute.empty());
    CHECK(whole.second_count == 258);
    CHECK(whole.first_mean == doctest::Approx(75.36).epsilon(1e-4));
    CHECK(std::abs(whole.first_sd - 60.18) < 0.005);
    CHECK(rows[0].edges + rows[1].edges == whole.edges);
    const std::vector<std::string> bad{"importance"};
    CHECK_THROWS_AS(subgraph_summary(net.graph, net.attributes, bad), ValidationError);
}
